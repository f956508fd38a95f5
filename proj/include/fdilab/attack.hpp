#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <ostream>
#include <string>

#include "fdilab/dcmodel.hpp"
#include "fdilab/measgen.hpp"
#include "fdilab/recover.hpp"
#include "fdilab/subspace.hpp"

namespace fdilab {

enum class AttackStrategy { known_h, random, pca_blind, svd_blind, alm_blind };

std::string strategy_name(AttackStrategy s);
AttackStrategy strategy_from_name(const std::string& name);

/// Additive measurement injection with its provenance: the strategy that
/// produced it, the target coefficient vector c (state shift for
/// known_h, basis coefficients for the blind families) and the subspace
/// rank the construction used.
struct AttackVector {
    Eigen::VectorXd a;
    AttackStrategy strategy = AttackStrategy::known_h;
    Eigen::VectorXd c;
    int basis_rank_used = 0;
    std::uint64_t seed = 0;
};

/// a = H c; exactly residual-invariant by construction.
AttackVector attack_known_h(const DcJacobian& jac, const Eigen::Ref<const Eigen::VectorXd>& c);

/// Gaussian direction scaled to the requested norm; the detectable
/// baseline.
AttackVector attack_random(int m, double magnitude, std::uint64_t seed);

struct BlindAttack {
    AttackVector attack;
    Eigen::VectorXd z_attack;
};

/// a = basis * c applied to z.
BlindAttack attack_blind(const ReducedBasis& basis, const Eigen::Ref<const Eigen::VectorXd>& c,
                         const Eigen::Ref<const Eigen::VectorXd>& z,
                         AttackStrategy strategy = AttackStrategy::pca_blind);

/// Thrown when the low-rank separation behind the robust blind attack
/// does not converge; carries the partial decomposition for inspection.
class AlmNotConverged : public std::runtime_error {
public:
    AlmNotConverged(std::string what, Decomposition partial)
        : std::runtime_error(std::move(what)), partial_(std::move(partial)) {}
    const Decomposition& partial() const { return partial_; }

private:
    Decomposition partial_;
};

struct AlmAttackOptions {
    double gamma = 0.995;   // cumulative-energy precision threshold
    double c_norm = 1.0;    // norm of the drawn coefficient vector
    double lambda = 0.0;    // 0: 1/sqrt(max(t,m))
    double tol = 1e-7;
    int max_iter = 3000;
    bool center = true;
    RankRule rank_rule = RankRule::cumulative_fraction;
};

struct AlmAttackResult {
    AttackVector attack;
    Eigen::VectorXd z_attack;
    Decomposition decomposition;
    PcaModel pca;
    ReducedBasis basis;
};

/// Gross-error-robust blind attack: separate the sparse corruption from
/// the window, fit the principal subspace of the recovered low-rank
/// part, pick the influential-component count, draw a Gaussian c of that
/// length and inject basis * c into z. All intermediate artifacts are
/// returned for auditing.
AlmAttackResult attack_alm(const MeasurementMatrix& window, double gamma, std::uint64_t c_seed,
                           const Eigen::Ref<const Eigen::VectorXd>& z);
AlmAttackResult attack_alm(const MeasurementMatrix& window, const AlmAttackOptions& options,
                           std::uint64_t c_seed, const Eigen::Ref<const Eigen::VectorXd>& z);

/// One row per sensor: index, injected value; header carries strategy,
/// rank and seed so a vector can be replayed.
void write_attack_csv(const AttackVector& attack, std::ostream& out);

} // namespace fdilab
