#include "fdilab/estimator.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fdilab/chi2.hpp"

namespace fdilab {
namespace {

void check_dims(const DcJacobian& jac, const Eigen::Ref<const Eigen::VectorXd>& z,
                const NoiseModel& noise) {
    if (z.size() != jac.m())
        throw std::invalid_argument("measurement vector has size " + std::to_string(z.size()) +
                                    ", expected " + std::to_string(jac.m()));
    if (noise.sigma.size() != jac.m())
        throw std::invalid_argument("noise model size does not match sensor count");
}

// WLS on an explicit (H, z, sigma) triple; shared with scrub's reduced
// systems.
Eigen::VectorXd wls_solve(const Eigen::MatrixXd& H, const Eigen::VectorXd& z,
                          const Eigen::VectorXd& sigma) {
    const Eigen::ArrayXd w = 1.0 / sigma.array();
    const Eigen::MatrixXd Hw = w.matrix().asDiagonal() * H;
    const Eigen::VectorXd zw = (z.array() * w).matrix();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Hw);
    if (qr.rank() < H.cols())
        throw ObservabilityError("weighted system is rank deficient");
    return qr.solve(zw);
}

DetectionOutcome detect_on(const Eigen::MatrixXd& H, const Eigen::VectorXd& z,
                           const Eigen::VectorXd& sigma, double confidence) {
    const Eigen::VectorXd x_hat = wls_solve(H, z, sigma);
    const Eigen::VectorXd r = z - H * x_hat;
    DetectionOutcome out;
    out.degrees_of_freedom = static_cast<int>(H.rows() - H.cols());
    out.wsse = (r.array() / sigma.array()).square().sum();
    out.threshold = chi_square_threshold(out.degrees_of_freedom, confidence);
    out.verdict = out.wsse >= out.threshold ? Verdict::bad_data : Verdict::clean;
    out.normalized_residuals = (r.array().abs() / sigma.array()).matrix();
    return out;
}

} // namespace

NoiseModel NoiseModel::from_snr(const Eigen::Ref<const Eigen::MatrixXd>& window, double snr_db,
                                double sigma_floor) {
    const double scale = std::pow(10.0, -snr_db / 20.0);
    NoiseModel nm;
    nm.sigma = (window.array().square().colwise().mean().sqrt() * scale)
                   .max(sigma_floor)
                   .matrix()
                   .transpose();
    return nm;
}

NoiseModel NoiseModel::uniform(int m, double sigma) {
    if (sigma <= 0.0) throw std::invalid_argument("sigma must be positive");
    NoiseModel nm;
    nm.sigma = Eigen::VectorXd::Constant(m, sigma);
    return nm;
}

Eigen::VectorXd wls_estimate(const DcJacobian& jac, const Eigen::Ref<const Eigen::VectorXd>& z,
                             const NoiseModel& noise) {
    check_dims(jac, z, noise);
    return wls_solve(jac.H, z, noise.sigma);
}

Eigen::VectorXd residual(const DcJacobian& jac, const Eigen::Ref<const Eigen::VectorXd>& z,
                         const Eigen::Ref<const Eigen::VectorXd>& x_hat) {
    if (z.size() != jac.m() || x_hat.size() != jac.n())
        throw std::invalid_argument("residual: dimension mismatch");
    return z - jac.H * x_hat;
}

double chi_square_threshold(int psi, double confidence) {
    if (psi < 1) throw std::invalid_argument("degrees of freedom must be >= 1");
    if (!(confidence > 0.0 && confidence < 1.0))
        throw std::invalid_argument("confidence must be in (0,1)");
    return chi_square_quantile(confidence, psi);
}

DetectionOutcome detect(const DcJacobian& jac, const Eigen::Ref<const Eigen::VectorXd>& z,
                        const NoiseModel& noise, double confidence) {
    check_dims(jac, z, noise);
    return detect_on(jac.H, z, noise.sigma, confidence);
}

ScrubResult scrub(const DcJacobian& jac, const Eigen::Ref<const Eigen::VectorXd>& z,
                  const NoiseModel& noise, double confidence, int max_rounds) {
    check_dims(jac, z, noise);
    const int n = jac.n();

    ScrubResult res;
    res.kept.resize(jac.m());
    for (int i = 0; i < jac.m(); ++i) res.kept[i] = i;

    auto gather = [&](const std::vector<int>& idx) {
        Eigen::MatrixXd H(idx.size(), n);
        Eigen::VectorXd zz(idx.size()), ss(idx.size());
        for (size_t i = 0; i < idx.size(); ++i) {
            H.row(i) = jac.H.row(idx[i]);
            zz(i) = z(idx[i]);
            ss(i) = noise.sigma(idx[i]);
        }
        return std::tuple{H, zz, ss};
    };

    auto [H, zz, ss] = gather(res.kept);
    res.outcome = detect_on(H, zz, ss, confidence);

    while (res.outcome.verdict == Verdict::bad_data && res.rounds < max_rounds) {
        if (static_cast<int>(res.kept.size()) - 1 < n + 1) {
            // psi would drop below 1; no redundancy left to test against
            res.stopped_for_observability = true;
            break;
        }
        int worst = 0;
        res.outcome.normalized_residuals.maxCoeff(&worst);

        std::vector<int> next = res.kept;
        next.erase(next.begin() + worst);
        auto [Hn, zn, sn] = gather(next);
        if (Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(Hn).rank() < n) {
            res.stopped_for_observability = true;
            break;
        }
        res.removed.push_back(res.kept[worst]);
        res.kept = std::move(next);
        res.outcome = detect_on(Hn, zn, sn, confidence);
        ++res.rounds;
    }

    res.z_clean.resize(res.kept.size());
    for (size_t i = 0; i < res.kept.size(); ++i) res.z_clean(i) = z(res.kept[i]);
    return res;
}

} // namespace fdilab
