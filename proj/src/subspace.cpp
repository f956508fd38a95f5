#include "fdilab/subspace.hpp"

#include <Eigen/Dense>

#include <stdexcept>

namespace fdilab {
namespace {

Eigen::MatrixXd sample_covariance(const Eigen::Ref<const Eigen::MatrixXd>& window, bool center,
                                  Eigen::VectorXd& mean_out) {
    const auto t = window.rows();
    if (t < 2) throw std::invalid_argument("covariance needs at least two observations");
    mean_out = window.colwise().mean().transpose();
    if (center) {
        const Eigen::MatrixXd centered = window.rowwise() - mean_out.transpose();
        return centered.transpose() * centered / static_cast<double>(t - 1);
    }
    return window.transpose() * window / static_cast<double>(t - 1);
}

// Largest-magnitude entry of every column made positive, ties broken by
// the first such entry; keeps bases reproducible across platforms.
void fix_signs(Eigen::MatrixXd& vectors) {
    for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
        Eigen::Index imax = 0;
        vectors.col(j).cwiseAbs().maxCoeff(&imax);
        if (vectors(imax, j) < 0.0) vectors.col(j) = -vectors.col(j);
    }
}

} // namespace

PcaModel fit_pca(const Eigen::Ref<const Eigen::MatrixXd>& window, bool center) {
    PcaModel model;
    model.t = static_cast<int>(window.rows());
    model.m = static_cast<int>(window.cols());

    Eigen::MatrixXd cov = sample_covariance(window, center, model.mean);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");

    // SelfAdjointEigenSolver returns ascending order; flip to descending.
    model.eigenvalues = es.eigenvalues().reverse().cwiseMax(0.0);
    model.transform = es.eigenvectors().rowwise().reverse();
    fix_signs(model.transform);
    return model;
}

int select_rank(const Eigen::Ref<const Eigen::VectorXd>& eigenvalues, double gamma,
                RankRule rule) {
    if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must be in (0,1]");
    const double total = eigenvalues.sum();
    if (!(total > 0.0)) throw std::invalid_argument("eigenvalue spectrum is all zero");

    const int m = static_cast<int>(eigenvalues.size());
    double cum = 0.0;
    if (rule == RankRule::cumulative_fraction) {
        for (int k = 0; k < m; ++k) {
            cum += eigenvalues(k);
            if (cum >= gamma * total) return k + 1;
        }
        return m;
    }
    // accumulate_while_below: keep adding components while the running
    // energy has not exceeded the threshold.
    int rho = 0;
    while (rho < m && cum <= gamma * total) {
        cum += eigenvalues(rho);
        ++rho;
    }
    return rho;
}

ReducedBasis reduced_basis(const PcaModel& model, int rho) {
    if (rho < 1 || rho > model.m) throw std::invalid_argument("rho out of range");
    return {model.transform.leftCols(rho), rho, 0.0};
}

ReducedBasis svd_subspace(const Eigen::Ref<const Eigen::MatrixXd>& window, int rho, bool center) {
    if (rho < 1 || rho > window.cols()) throw std::invalid_argument("rho out of range");
    Eigen::VectorXd mean;
    const Eigen::MatrixXd cov = sample_covariance(window, center, mean);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(cov, Eigen::ComputeThinU);
    Eigen::MatrixXd u = svd.matrixU().leftCols(rho);
    for (Eigen::Index j = 0; j < u.cols(); ++j) {
        Eigen::Index imax = 0;
        u.col(j).cwiseAbs().maxCoeff(&imax);
        if (u(imax, j) < 0.0) u.col(j) = -u.col(j);
    }
    return {std::move(u), rho, 0.0};
}

} // namespace fdilab
