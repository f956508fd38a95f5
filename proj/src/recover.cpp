#include "fdilab/recover.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace fdilab {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double spectral_norm(const MatrixXd& m) {
    return Eigen::BDCSVD<MatrixXd>(m).singularValues()(0);
}

int count_nonzeros(const MatrixXd& m) {
    return static_cast<int>((m.array() != 0.0).count());
}

// SVD-shrink that also reports the surviving rank.
MatrixXd sv_shrink(const MatrixXd& m, double eps, int* rank_out = nullptr) {
    Eigen::BDCSVD<MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    VectorXd s = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        s(i) = std::max(s(i) - eps, 0.0);
        if (s(i) > 0.0) ++rank;
    }
    if (rank_out) *rank_out = rank;
    if (rank == 0) return MatrixXd::Zero(m.rows(), m.cols());
    return svd.matrixU().leftCols(rank) * s.head(rank).asDiagonal() *
           svd.matrixV().leftCols(rank).transpose();
}

Decomposition trivial_zero(const RpcaProblem& p) {
    Decomposition d;
    d.A = MatrixXd::Zero(p.Z.rows(), p.Z.cols());
    d.E = d.A;
    d.converged = true;
    return d;
}

} // namespace

double RpcaProblem::effective_lambda() const {
    if (lambda > 0.0) return lambda;
    return 1.0 / std::sqrt(static_cast<double>(std::max(Z.rows(), Z.cols())));
}

double Decomposition::relative_error_fro(const Eigen::Ref<const Eigen::MatrixXd>& Z) const {
    const double denom = Z.norm();
    return denom == 0.0 ? 0.0 : (Z - A - E).norm() / denom;
}

double Decomposition::relative_error_spectral(const Eigen::Ref<const Eigen::MatrixXd>& Z) const {
    const double denom = spectral_norm(Z);
    return denom == 0.0 ? 0.0 : spectral_norm(Z - A - E) / denom;
}

double soft_threshold(double x, double eps) {
    if (x > eps) return x - eps;
    if (x < -eps) return x + eps;
    return 0.0;
}

MatrixXd soft_threshold(const Eigen::Ref<const MatrixXd>& m, double eps) {
    return m.unaryExpr([eps](double x) { return soft_threshold(x, eps); });
}

MatrixXd singular_value_shrink(const Eigen::Ref<const MatrixXd>& m, double eps) {
    if (eps < 0.0) throw std::invalid_argument("shrink threshold must be >= 0");
    return sv_shrink(m, eps);
}

Decomposition solve_alm(const RpcaProblem& problem) {
    const auto start = Clock::now();
    const MatrixXd& Z = problem.Z;
    const double norm_z = Z.norm();
    if (norm_z == 0.0) return trivial_zero(problem);

    const double lambda = problem.effective_lambda();
    const double sigma_max = spectral_norm(Z);

    // Multiplier scaled so that <gamma, Z> starts at a dual-feasible
    // magnitude; mu grows geometrically.
    struct AlmState {
        MatrixXd gamma;
        double mu;
        double omega;
    };
    AlmState state{Z / std::max(sigma_max, Z.cwiseAbs().maxCoeff() / lambda),
                   1.25 / sigma_max, 1.5};

    Decomposition d;
    d.A = MatrixXd::Zero(Z.rows(), Z.cols());
    d.E = d.A;

    for (int k = 0; k < problem.max_iter; ++k) {
        int rank = 0;
        d.A = sv_shrink(Z - d.E + state.gamma / state.mu, 1.0 / state.mu, &rank);
        d.E = soft_threshold(Z - d.A + state.gamma / state.mu, lambda / state.mu);

        const MatrixXd resid = Z - d.A - d.E;
        const double c = resid.norm() / norm_z;
        d.trace.push_back({c, rank, count_nonzeros(d.E)});
        d.iterations = k + 1;
        if (c <= problem.tol) {
            d.converged = true;
            break;
        }
        state.gamma += state.mu * resid;
        state.mu *= state.omega;
    }
    d.wall_time_s = seconds_since(start);
    return d;
}

Decomposition solve_apg(const RpcaProblem& problem) {
    const auto start = Clock::now();
    const MatrixXd& Z = problem.Z;
    const double norm_z = Z.norm();
    if (norm_z == 0.0) return trivial_zero(problem);

    const double lambda = problem.effective_lambda();
    const double sigma_max = spectral_norm(Z);

    // Continuation schedule and proximal stopping rule follow the
    // standard accelerated scheme with Lipschitz constant 2.
    const double eta = 0.9;
    double mu = 0.99 * sigma_max;
    const double mu_bar = 1e-9 * sigma_max;
    const double tol_prox = 1e-6;

    MatrixXd A = MatrixXd::Zero(Z.rows(), Z.cols());
    MatrixXd E = A, A_prev = A, E_prev = A;
    double t_cur = 1.0, t_prev = 1.0;

    Decomposition d;
    d.A = A;
    d.E = E;

    for (int k = 0; k < problem.max_iter; ++k) {
        const double beta = (t_prev - 1.0) / t_cur;
        const MatrixXd YA = A + beta * (A - A_prev);
        const MatrixXd YE = E + beta * (E - E_prev);
        const MatrixXd G = 0.5 * (YA + YE - Z);

        int rank = 0;
        MatrixXd A_next = sv_shrink(YA - G, mu / 2.0, &rank);
        MatrixXd E_next = soft_threshold(YE - G, lambda * mu / 2.0);

        const MatrixXd common = A_next + E_next - YA - YE;
        const double s_norm =
            std::sqrt((2.0 * (YA - A_next) + common).squaredNorm() +
                      (2.0 * (YE - E_next) + common).squaredNorm());
        const double x_norm = std::sqrt(A_next.squaredNorm() + E_next.squaredNorm());

        A_prev = std::move(A);
        E_prev = std::move(E);
        A = std::move(A_next);
        E = std::move(E_next);
        t_prev = t_cur;
        t_cur = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_cur * t_cur));
        mu = std::max(eta * mu, mu_bar);

        const double c = (Z - A - E).norm() / norm_z;
        d.trace.push_back({c, rank, count_nonzeros(E)});
        d.iterations = k + 1;
        if (c <= problem.tol || s_norm <= tol_prox * 2.0 * std::max(1.0, x_norm)) break;
    }
    d.A = std::move(A);
    d.E = std::move(E);
    d.converged = d.trace.back().rel_error <= problem.tol;
    d.wall_time_s = seconds_since(start);
    return d;
}

Decomposition solve_svt(const RpcaProblem& problem) {
    const auto start = Clock::now();
    const MatrixXd& Z = problem.Z;
    const double norm_z = Z.norm();
    if (norm_z == 0.0) return trivial_zero(problem);

    const double lambda = problem.effective_lambda();
    const double sigma_max = spectral_norm(Z);
    const double tau = 50.0 * sigma_max; // smoothing weight
    const double delta = 0.9;            // dual step

    MatrixXd Y = MatrixXd::Zero(Z.rows(), Z.cols());
    Decomposition d;
    d.A = Y;
    d.E = Y;

    for (int k = 0; k < problem.max_iter; ++k) {
        int rank = 0;
        d.A = sv_shrink(Y, tau, &rank);
        d.E = soft_threshold(Y, lambda * tau);
        const MatrixXd resid = Z - d.A - d.E;
        const double c = resid.norm() / norm_z;
        d.trace.push_back({c, rank, count_nonzeros(d.E)});
        d.iterations = k + 1;
        if (c <= problem.tol) {
            d.converged = true;
            break;
        }
        Y += delta * resid;
    }
    d.wall_time_s = seconds_since(start);
    return d;
}

Decomposition solve_dual(const RpcaProblem& problem) {
    const auto start = Clock::now();
    const MatrixXd& Z = problem.Z;
    const double norm_z = Z.norm();
    if (norm_z == 0.0) return trivial_zero(problem);

    const double lambda = problem.effective_lambda();
    const auto dual_gauge = [&](const MatrixXd& X) {
        return std::max(spectral_norm(X), X.cwiseAbs().maxCoeff() / lambda);
    };

    const double active_tol = 1e-3; // relative slack for active constraints
    const int inner_sweeps = 10;

    MatrixXd Y = Z / dual_gauge(Z);
    Decomposition d;
    d.A = MatrixXd::Zero(Z.rows(), Z.cols());
    d.E = d.A;

    for (int k = 0; k < problem.max_iter; ++k) {
        Eigen::BDCSVD<MatrixXd> svd(Y, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const VectorXd& sv = svd.singularValues();
        const double top = sv(0);
        int r = 0;
        while (r < sv.size() && sv(r) >= top * (1.0 - active_tol)) ++r;
        if (top < 1.0 - active_tol) r = 0; // spectral constraint inactive
        const MatrixXd Ur = svd.matrixU().leftCols(r);
        const MatrixXd Vr = svd.matrixV().leftCols(r);

        // Alternating projection of Z onto the sum of the two normal
        // cones at Y: a PSD-constrained block in the top singular frame
        // plus a sign-matched block on the active box entries.
        MatrixXd A = MatrixXd::Zero(Z.rows(), Z.cols());
        MatrixXd E = A;
        for (int sweep = 0; sweep < inner_sweeps; ++sweep) {
            if (r > 0) {
                MatrixXd W = Ur.transpose() * (Z - E) * Vr;
                W = 0.5 * (W + W.transpose()).eval();
                Eigen::SelfAdjointEigenSolver<MatrixXd> es(W);
                const VectorXd evs = es.eigenvalues().cwiseMax(0.0);
                A = Ur * (es.eigenvectors() * evs.asDiagonal() *
                          es.eigenvectors().transpose()) *
                    Vr.transpose();
            }
            const MatrixXd T = Z - A;
            E.setZero();
            for (Eigen::Index i = 0; i < Y.rows(); ++i)
                for (Eigen::Index j = 0; j < Y.cols(); ++j)
                    if (std::abs(Y(i, j)) >= lambda * (1.0 - active_tol) &&
                        T(i, j) * Y(i, j) > 0.0)
                        E(i, j) = T(i, j);
        }
        d.A = A;
        d.E = E;

        const MatrixXd g = Z - A - E;
        const double c = g.norm() / norm_z;
        d.trace.push_back({c, r, count_nonzeros(E)});
        d.iterations = k + 1;
        if (c <= problem.tol) {
            d.converged = true;
            break;
        }

        // Golden-section line search on the radially retracted ascent.
        const MatrixXd dir = g / g.norm();
        const auto objective = [&](double s) {
            const MatrixXd cand = Y + s * dir;
            return (Z.array() * cand.array()).sum() / dual_gauge(cand);
        };
        const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
        double lo = 0.0, hi = 1.0;
        double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
        double f1 = objective(x1), f2 = objective(x2);
        for (int it = 0; it < 12; ++it) {
            if (f1 < f2) {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + phi * (hi - lo);
                f2 = objective(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - phi * (hi - lo);
                f1 = objective(x1);
            }
        }
        const double s_best = 0.5 * (lo + hi);
        if (s_best <= 1e-12) break; // no ascent available
        const MatrixXd cand = Y + s_best * dir;
        Y = cand / dual_gauge(cand);
    }
    d.wall_time_s = seconds_since(start);
    return d;
}

Decomposition solve(RpcaSolver solver, const RpcaProblem& problem) {
    switch (solver) {
    case RpcaSolver::alm: return solve_alm(problem);
    case RpcaSolver::apg: return solve_apg(problem);
    case RpcaSolver::svt: return solve_svt(problem);
    case RpcaSolver::dual: return solve_dual(problem);
    }
    throw std::logic_error("unknown solver");
}

RpcaSolver solver_from_name(const std::string& name) {
    if (name == "alm") return RpcaSolver::alm;
    if (name == "apg") return RpcaSolver::apg;
    if (name == "svt") return RpcaSolver::svt;
    if (name == "dual") return RpcaSolver::dual;
    throw std::invalid_argument("unknown solver '" + name + "'");
}

const char* solver_name(RpcaSolver solver) {
    switch (solver) {
    case RpcaSolver::alm: return "alm";
    case RpcaSolver::apg: return "apg";
    case RpcaSolver::svt: return "svt";
    case RpcaSolver::dual: return "dual";
    }
    return "?";
}

void write_trace_csv(const Decomposition& d, std::ostream& out) {
    out << "iteration,rel_error,rank_a,nnz_e\n";
    for (size_t i = 0; i < d.trace.size(); ++i)
        out << i + 1 << ',' << d.trace[i].rel_error << ',' << d.trace[i].rank_a << ','
            << d.trace[i].nnz_e << '\n';
}

} // namespace fdilab
