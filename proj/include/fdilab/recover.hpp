#pragma once

#include <Eigen/Core>

#include <ostream>
#include <string>
#include <vector>

namespace fdilab {

/// Inputs of the sparse + low-rank separation
///   min ||A||_* + lambda ||E||_1   s.t.  Z = A + E.
/// lambda <= 0 selects the standard 1/sqrt(max(t, m)).
struct RpcaProblem {
    Eigen::MatrixXd Z;
    double lambda = 0.0;
    double tol = 1e-7; // stop when ||Z-A-E||_F/||Z||_F <= tol
    int max_iter = 3000;

    double effective_lambda() const;
};

struct TracePoint {
    double rel_error;  // c_k
    int rank_a;
    int nnz_e;
};

struct Decomposition {
    Eigen::MatrixXd A;
    Eigen::MatrixXd E;
    int iterations = 0;
    std::vector<TracePoint> trace;
    bool converged = false;
    double wall_time_s = 0.0;

    double relative_error_fro(const Eigen::Ref<const Eigen::MatrixXd>& Z) const;
    /// Spectral-norm relative error, the benchmark accuracy metric.
    double relative_error_spectral(const Eigen::Ref<const Eigen::MatrixXd>& Z) const;
};

/// Scalar shrinkage: x-eps above eps, x+eps below -eps, else 0.
double soft_threshold(double x, double eps);
Eigen::MatrixXd soft_threshold(const Eigen::Ref<const Eigen::MatrixXd>& m, double eps);

/// Soft-threshold the singular values of m and reconstruct.
Eigen::MatrixXd singular_value_shrink(const Eigen::Ref<const Eigen::MatrixXd>& m, double eps);

/// Inexact augmented-Lagrange-multiplier iteration (one A/E sweep per
/// outer step, multiplier update, geometric mu growth).
Decomposition solve_alm(const RpcaProblem& problem);

/// Accelerated proximal gradient with continuation on the smoothing
/// parameter.
Decomposition solve_apg(const RpcaProblem& problem);

/// Dual-ascent iterative thresholding (singular value thresholding of
/// the accumulated dual variable).
Decomposition solve_svt(const RpcaProblem& problem);

/// Projected steepest ascent on the dual problem
///   max <Z, Y>  s.t.  max(||Y||_2, ||Y||_inf/lambda) <= 1,
/// with the primal pair recovered from normal-cone projections.
Decomposition solve_dual(const RpcaProblem& problem);

enum class RpcaSolver { alm, apg, svt, dual };

Decomposition solve(RpcaSolver solver, const RpcaProblem& problem);
RpcaSolver solver_from_name(const std::string& name);
const char* solver_name(RpcaSolver solver);

/// Columns: iteration, rel_error, rank_a, nnz_e.
void write_trace_csv(const Decomposition& d, std::ostream& out);

} // namespace fdilab
