#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <istream>
#include <ostream>
#include <vector>

#include "fdilab/dcmodel.hpp"
#include "fdilab/estimator.hpp"

namespace fdilab {

/// t x m observation window. Each row is one time instant of all
/// sensors. `noiseless` holds H x_k per row; `truth` adds the Gaussian
/// sensor noise and is what `z` equals wherever no gross error was
/// injected.
struct MeasurementMatrix {
    Eigen::MatrixXd z;
    Eigen::MatrixXd noiseless;
    Eigen::MatrixXd truth;

    struct GrossEntry {
        int row;
        int col;
        double value; // additive corruption: z = truth + value
    };
    std::vector<GrossEntry> gross_mask;

    double snr_db = 0.0;
    std::uint64_t seed = 0;
    NoiseModel noise; // the sigma used to generate the window

    int t() const { return static_cast<int>(z.rows()); }
    int m() const { return static_cast<int>(z.cols()); }
};

enum class GrossRule {
    multiple_of_max, // additive +-k * max|Z|
    missing_as_zero, // entry replaced by 0
};

struct GrossErrorSpec {
    double density = 0.0;                      // fraction of entries corrupted, in [0, 0.5]
    GrossRule rule = GrossRule::multiple_of_max;
    double k = 10.0;                           // multiplier for multiple_of_max
    std::uint64_t seed = 0;
};

/// Draw x_k ~ N(x0, state_sigma^2 I) i.i.d. per row, evaluate H x_k, and
/// add Gaussian sensor noise at snr_db (sigma_i from the rms of the
/// noiseless column). Deterministic given the seed.
MeasurementMatrix generate(const DcJacobian& jac, const Eigen::Ref<const Eigen::VectorXd>& x0,
                           int t, double state_sigma, double snr_db, std::uint64_t seed);

/// Corrupt ceil(density * t * m) distinct entries chosen uniformly at
/// random. Rejects density > 0.5 (the residual matrix could not be
/// sparse). Returns a copy; the mask records the injected values.
MeasurementMatrix corrupt(const MeasurementMatrix& mat, const GrossErrorSpec& spec);

void write_matrix_csv(const Eigen::Ref<const Eigen::MatrixXd>& m, std::ostream& out);
Eigen::MatrixXd read_matrix_csv(std::istream& in);

} // namespace fdilab
