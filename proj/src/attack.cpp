#include "fdilab/attack.hpp"

#include <stdexcept>

#include "fdilab/rng.hpp"

namespace fdilab {

std::string strategy_name(AttackStrategy s) {
    switch (s) {
    case AttackStrategy::known_h: return "known_h";
    case AttackStrategy::random: return "random";
    case AttackStrategy::pca_blind: return "pca_blind";
    case AttackStrategy::svd_blind: return "svd_blind";
    case AttackStrategy::alm_blind: return "alm_blind";
    }
    return "?";
}

AttackStrategy strategy_from_name(const std::string& name) {
    if (name == "known_h") return AttackStrategy::known_h;
    if (name == "random") return AttackStrategy::random;
    if (name == "pca_blind") return AttackStrategy::pca_blind;
    if (name == "svd_blind") return AttackStrategy::svd_blind;
    if (name == "alm_blind") return AttackStrategy::alm_blind;
    throw std::invalid_argument("unknown attack strategy '" + name + "'");
}

AttackVector attack_known_h(const DcJacobian& jac, const Eigen::Ref<const Eigen::VectorXd>& c) {
    if (c.size() != jac.n()) throw std::invalid_argument("state shift has wrong dimension");
    if (c.isZero(0.0)) throw std::invalid_argument("state shift must be nonzero");
    AttackVector av;
    av.a = jac.H * c;
    av.strategy = AttackStrategy::known_h;
    av.c = c;
    av.basis_rank_used = jac.n();
    return av;
}

AttackVector attack_random(int m, double magnitude, std::uint64_t seed) {
    if (magnitude <= 0.0) throw std::invalid_argument("attack magnitude must be positive");
    Rng rng(seed);
    AttackVector av;
    av.a = rng.normal_vector(m);
    av.a *= magnitude / av.a.norm();
    av.strategy = AttackStrategy::random;
    av.c = av.a;
    av.basis_rank_used = 0;
    av.seed = seed;
    return av;
}

BlindAttack attack_blind(const ReducedBasis& basis, const Eigen::Ref<const Eigen::VectorXd>& c,
                         const Eigen::Ref<const Eigen::VectorXd>& z, AttackStrategy strategy) {
    if (c.size() != basis.rho) throw std::invalid_argument("coefficient length must equal rho");
    if (c.isZero(0.0)) throw std::invalid_argument("coefficient vector must be nonzero");
    if (z.size() != basis.basis.rows())
        throw std::invalid_argument("measurement vector does not match the basis");
    BlindAttack out;
    out.attack.a = basis.basis * c;
    out.attack.strategy = strategy;
    out.attack.c = c;
    out.attack.basis_rank_used = basis.rho;
    out.z_attack = z + out.attack.a;
    return out;
}

AlmAttackResult attack_alm(const MeasurementMatrix& window, double gamma, std::uint64_t c_seed,
                           const Eigen::Ref<const Eigen::VectorXd>& z) {
    AlmAttackOptions options;
    options.gamma = gamma;
    return attack_alm(window, options, c_seed, z);
}

AlmAttackResult attack_alm(const MeasurementMatrix& window, const AlmAttackOptions& options,
                           std::uint64_t c_seed, const Eigen::Ref<const Eigen::VectorXd>& z) {
    if (window.z.size() == 0) throw std::invalid_argument("empty measurement window");

    AlmAttackResult res;

    RpcaProblem problem;
    problem.Z = window.z;
    problem.lambda = options.lambda;
    problem.tol = options.tol;
    problem.max_iter = options.max_iter;
    res.decomposition = solve_alm(problem);
    if (!res.decomposition.converged)
        throw AlmNotConverged("low-rank separation did not converge within " +
                                  std::to_string(options.max_iter) + " iterations",
                              std::move(res.decomposition));

    res.pca = fit_pca(res.decomposition.A, options.center);
    const int rho = select_rank(res.pca.eigenvalues, options.gamma, options.rank_rule);
    res.basis = reduced_basis(res.pca, rho);
    res.basis.gamma_used = options.gamma;

    Rng rng(c_seed);
    Eigen::VectorXd c = rng.normal_vector(rho);
    while (c.isZero(0.0)) c = rng.normal_vector(rho); // nonzero by contract
    c *= options.c_norm / c.norm();

    BlindAttack blind = attack_blind(res.basis, c, z, AttackStrategy::alm_blind);
    res.attack = std::move(blind.attack);
    res.attack.seed = c_seed;
    res.z_attack = std::move(blind.z_attack);
    return res;
}

void write_attack_csv(const AttackVector& attack, std::ostream& out) {
    out << "# strategy=" << strategy_name(attack.strategy) << ",rho=" << attack.basis_rank_used
        << ",seed=" << attack.seed << '\n';
    out << "sensor,a\n";
    out.precision(17);
    for (Eigen::Index i = 0; i < attack.a.size(); ++i) out << i << ',' << attack.a(i) << '\n';
}

} // namespace fdilab
