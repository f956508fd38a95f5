#pragma once

#include <Eigen/Core>

namespace fdilab {

/// Full eigenbasis of the sample covariance of an observation window.
/// Columns of `transform` are unit eigenvectors in descending eigenvalue
/// order with a deterministic sign (largest-magnitude entry positive).
struct PcaModel {
    Eigen::MatrixXd transform;   // m x m
    Eigen::VectorXd eigenvalues; // descending, clipped at 0
    Eigen::VectorXd mean;        // column means of the window
    int t = 0;
    int m = 0;
};

/// Leading part of a PcaModel (or of a covariance SVD); the columns play
/// the role of an estimated measurement-subspace basis.
struct ReducedBasis {
    Eigen::MatrixXd basis; // m x rho, orthonormal columns
    int rho = 0;
    double gamma_used = 0.0;
};

/// Boundary semantics for the influential-component count. The two
/// rules differ only when the cumulative energy fraction hits gamma
/// exactly.
enum class RankRule {
    cumulative_fraction,     // smallest k with cum_k / total >= gamma
    accumulate_while_below,  // grow while cum / total <= gamma
};

/// Column-center (optional), form the 1/(t-1) sample covariance and
/// eigen-decompose it. Requires t >= 2.
PcaModel fit_pca(const Eigen::Ref<const Eigen::MatrixXd>& window, bool center = true);

/// Number of influential principal components for a cumulative-energy
/// precision threshold gamma in (0,1].
int select_rank(const Eigen::Ref<const Eigen::VectorXd>& eigenvalues, double gamma,
                RankRule rule = RankRule::cumulative_fraction);

/// First rho eigenvector columns.
ReducedBasis reduced_basis(const PcaModel& model, int rho);

/// Covariance-SVD variant of the subspace estimate: first rho left
/// singular vectors of the sample covariance.
ReducedBasis svd_subspace(const Eigen::Ref<const Eigen::MatrixXd>& window, int rho,
                          bool center = true);

} // namespace fdilab
