#pragma once

#include <Eigen/Core>

#include <ostream>
#include <stdexcept>
#include <vector>

#include "fdilab/casefile.hpp"

namespace fdilab {

/// Thrown when the measurement matrix loses full column rank, i.e. the
/// network is not observable.
class ObservabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SensorKind { flow_from, flow_to, injection };

struct SensorMeta {
    SensorKind kind;
    int element; // branch index (file order) for flows, bus id for injections
};

/// DC measurement Jacobian. Row order: all flow_from sensors by branch
/// order, then all flow_to sensors, then injections by bus order. The
/// reference-bus column is dropped; states are voltage angles in
/// radians at the remaining buses.
struct DcJacobian {
    Eigen::MatrixXd H; // m x n
    std::vector<SensorMeta> sensors;
    std::vector<int> state_bus_ids;

    int m() const { return static_cast<int>(H.rows()); }
    int n() const { return static_cast<int>(H.cols()); }
};

/// Build H from the case. flow_from for branch (i,j) is (theta_i - theta_j)/x,
/// flow_to is its negative, and each injection row is the signed sum of the
/// flow_from rows of the branches incident to the bus. Out-of-service
/// branches are skipped. Throws ObservabilityError if rank(H) < n.
DcJacobian build_jacobian(const GridCase& c);

/// z = H x (per-unit power at every sensor).
Eigen::VectorXd evaluate(const DcJacobian& jac, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Operating-point angles: solves the DC power flow B theta = p where B is
/// the reduced susceptance matrix (the injection rows of H) and p is the
/// per-unit net injection at non-reference buses. The bus Pd column is
/// read as withdrawal, so p = -Pd/baseMVA; the slack bus absorbs the
/// balance.
Eigen::VectorXd operating_state(const GridCase& c, const DcJacobian& jac);

/// Dump H with a sensor-label column for external verification.
void write_jacobian_csv(const DcJacobian& jac, std::ostream& out);

} // namespace fdilab
