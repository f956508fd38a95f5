#pragma once

#include <Eigen/Core>

#include <vector>

#include "fdilab/dcmodel.hpp"

namespace fdilab {

/// Per-sensor noise model, R = diag(sigma_i^2).
struct NoiseModel {
    Eigen::VectorXd sigma;

    /// sigma_i = rms(column i of window) * 10^(-snr_db/20). The floor
    /// keeps sensors whose signal is numerically silent from producing
    /// infinite weights.
    static NoiseModel from_snr(const Eigen::Ref<const Eigen::MatrixXd>& window, double snr_db,
                               double sigma_floor = 1e-9);
    static NoiseModel uniform(int m, double sigma);
};

enum class Verdict { clean, bad_data };

struct DetectionOutcome {
    double wsse = 0.0;      // J(x_hat), the detection statistic
    double threshold = 0.0; // chi-square quantile at the working confidence
    Verdict verdict = Verdict::clean;
    Eigen::VectorXd normalized_residuals; // |r_i| / sigma_i
    int degrees_of_freedom = 0;           // m - n
};

/// Weighted least-squares state estimate via QR on the row-scaled
/// system (no normal equations).
Eigen::VectorXd wls_estimate(const DcJacobian& jac, const Eigen::Ref<const Eigen::VectorXd>& z,
                             const NoiseModel& noise);

Eigen::VectorXd residual(const DcJacobian& jac, const Eigen::Ref<const Eigen::VectorXd>& z,
                         const Eigen::Ref<const Eigen::VectorXd>& x_hat);

/// Inverse chi-square CDF with psi degrees of freedom.
double chi_square_threshold(int psi, double confidence);

/// Chi-square test on the WLS objective, with normalized residuals for
/// the LNR identification stage.
DetectionOutcome detect(const DcJacobian& jac, const Eigen::Ref<const Eigen::VectorXd>& z,
                        const NoiseModel& noise, double confidence);

struct ScrubResult {
    Eigen::VectorXd z_clean;         // measurements that survived, original order
    std::vector<int> removed;        // removed sensor indices (into jac rows)
    std::vector<int> kept;           // surviving sensor indices
    DetectionOutcome outcome;        // final verdict on the surviving set
    bool stopped_for_observability = false;
    int rounds = 0;
};

/// Iteratively remove the largest-normalized-residual sensor while the
/// chi-square stage flags bad data. Stops when clean, when max_rounds is
/// reached, or when a removal would make the system unobservable (the
/// stop reason is reported in the result).
ScrubResult scrub(const DcJacobian& jac, const Eigen::Ref<const Eigen::VectorXd>& z,
                  const NoiseModel& noise, double confidence, int max_rounds);

} // namespace fdilab
