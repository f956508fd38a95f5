#include "fdilab/dcmodel.hpp"

#include <Eigen/Dense>

#include <unordered_map>

namespace fdilab {

DcJacobian build_jacobian(const GridCase& c) {
    const int n_bus = static_cast<int>(c.buses.size());
    const int n = n_bus - 1;

    // state column for each bus id; reference bus has none
    std::unordered_map<int, int> state_col;
    DcJacobian jac;
    for (const auto& b : c.buses) {
        if (b.type == BusType::reference) continue;
        state_col[b.id] = static_cast<int>(jac.state_bus_ids.size());
        jac.state_bus_ids.push_back(b.id);
    }

    std::vector<int> live; // indices of in-service branches, file order
    for (size_t i = 0; i < c.branches.size(); ++i)
        if (c.branches[i].status == BranchStatus::in_service) live.push_back(static_cast<int>(i));

    const int n_flow = static_cast<int>(live.size());
    const int m = 2 * n_flow + n_bus;
    jac.H = Eigen::MatrixXd::Zero(m, n);
    jac.sensors.reserve(m);

    // flow_from block
    for (int k = 0; k < n_flow; ++k) {
        const BranchRecord& br = c.branches[live[k]];
        const double w = 1.0 / br.reactance_x;
        auto it = state_col.find(br.from);
        if (it != state_col.end()) jac.H(k, it->second) += w;
        it = state_col.find(br.to);
        if (it != state_col.end()) jac.H(k, it->second) -= w;
        jac.sensors.push_back({SensorKind::flow_from, live[k]});
    }
    // flow_to block
    for (int k = 0; k < n_flow; ++k) {
        jac.H.row(n_flow + k) = -jac.H.row(k);
        jac.sensors.push_back({SensorKind::flow_to, live[k]});
    }
    // injection block: signed sum of flow_from rows of incident branches
    for (int b = 0; b < n_bus; ++b) {
        const int row = 2 * n_flow + b;
        const int id = c.buses[b].id;
        for (int k = 0; k < n_flow; ++k) {
            const BranchRecord& br = c.branches[live[k]];
            if (br.from == id) jac.H.row(row) += jac.H.row(k);
            if (br.to == id) jac.H.row(row) -= jac.H.row(k);
        }
        jac.sensors.push_back({SensorKind::injection, id});
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(jac.H);
    if (qr.rank() < n)
        throw ObservabilityError("measurement Jacobian is rank deficient (rank " +
                                 std::to_string(qr.rank()) + " < " + std::to_string(n) + ")");
    return jac;
}

Eigen::VectorXd evaluate(const DcJacobian& jac, const Eigen::Ref<const Eigen::VectorXd>& x) {
    if (x.size() != jac.n())
        throw std::invalid_argument("state vector has size " + std::to_string(x.size()) +
                                    ", expected " + std::to_string(jac.n()));
    return jac.H * x;
}

Eigen::VectorXd operating_state(const GridCase& c, const DcJacobian& jac) {
    const int n = jac.n();
    Eigen::MatrixXd B(n, n);
    Eigen::VectorXd p(n);
    const int inj_base = jac.m() - static_cast<int>(c.buses.size());
    for (int j = 0; j < n; ++j) {
        const int bus_id = jac.state_bus_ids[j];
        const int bus_pos = c.bus_index(bus_id);
        B.row(j) = jac.H.row(inj_base + bus_pos);
        p(j) = -c.buses[bus_pos].p_injection / c.base_mva;
    }
    return B.partialPivLu().solve(p);
}

void write_jacobian_csv(const DcJacobian& jac, std::ostream& out) {
    out << "sensor,kind,element";
    for (int id : jac.state_bus_ids) out << ",theta_" << id;
    out << "\n";
    for (int i = 0; i < jac.m(); ++i) {
        const SensorMeta& s = jac.sensors[i];
        const char* kind = s.kind == SensorKind::flow_from ? "flow_from"
                           : s.kind == SensorKind::flow_to ? "flow_to"
                                                           : "injection";
        out << i << "," << kind << "," << s.element;
        for (int j = 0; j < jac.n(); ++j) out << "," << jac.H(i, j);
        out << "\n";
    }
}

} // namespace fdilab
