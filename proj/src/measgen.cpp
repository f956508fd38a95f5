#include "fdilab/measgen.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

#include "fdilab/rng.hpp"

namespace fdilab {

MeasurementMatrix generate(const DcJacobian& jac, const Eigen::Ref<const Eigen::VectorXd>& x0,
                           int t, double state_sigma, double snr_db, std::uint64_t seed) {
    if (t < 1) throw std::invalid_argument("window length t must be >= 1");
    if (x0.size() != jac.n()) throw std::invalid_argument("operating state has wrong dimension");

    Rng rng(seed);
    MeasurementMatrix mm;
    mm.snr_db = snr_db;
    mm.seed = seed;

    Eigen::MatrixXd states(t, jac.n());
    for (int k = 0; k < t; ++k)
        states.row(k) = (x0 + state_sigma * rng.normal_vector(jac.n())).transpose();
    mm.noiseless = states * jac.H.transpose();

    mm.noise = NoiseModel::from_snr(mm.noiseless, snr_db);
    mm.truth = mm.noiseless;
    for (int k = 0; k < t; ++k)
        for (int j = 0; j < jac.m(); ++j) mm.truth(k, j) += mm.noise.sigma(j) * rng.normal();
    mm.z = mm.truth;
    return mm;
}

MeasurementMatrix corrupt(const MeasurementMatrix& mat, const GrossErrorSpec& spec) {
    if (spec.density < 0.0) throw std::invalid_argument("gross-error density must be >= 0");
    if (spec.density > 0.5)
        throw std::invalid_argument("gross-error density above 50% is not sparse");
    if (mat.truth.size() == 0) throw std::invalid_argument("corrupt needs the truth matrix");
    if (spec.rule == GrossRule::multiple_of_max && spec.k <= 1.0)
        throw std::invalid_argument("multiple_of_max requires k > 1");

    MeasurementMatrix out = mat;
    const std::int64_t total = static_cast<std::int64_t>(mat.z.rows()) * mat.z.cols();
    const std::int64_t count = static_cast<std::int64_t>(std::ceil(spec.density * total));
    if (count == 0) return out;

    Rng rng(spec.seed);
    // partial Fisher-Yates over the flat index space
    std::vector<std::int64_t> flat(total);
    for (std::int64_t i = 0; i < total; ++i) flat[i] = i;
    const double magnitude = spec.k * mat.z.cwiseAbs().maxCoeff();
    for (std::int64_t i = 0; i < count; ++i) {
        const std::int64_t j = i + static_cast<std::int64_t>(rng.uniform_below(total - i));
        std::swap(flat[i], flat[j]);
        const int r = static_cast<int>(flat[i] / mat.z.cols());
        const int c = static_cast<int>(flat[i] % mat.z.cols());
        double value;
        if (spec.rule == GrossRule::multiple_of_max)
            value = (rng.uniform01() < 0.5 ? -1.0 : 1.0) * magnitude;
        else
            value = -mat.truth(r, c); // entry reads 0, as if missing
        out.z(r, c) = mat.truth(r, c) + value;
        out.gross_mask.push_back({r, c, value});
    }
    return out;
}

void write_matrix_csv(const Eigen::Ref<const Eigen::MatrixXd>& m, std::ostream& out) {
    out.precision(17);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            out << m(i, j);
        }
        out << '\n';
    }
}

Eigen::MatrixXd read_matrix_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error("ragged CSV matrix");
        rows.push_back(std::move(row));
    }
    Eigen::MatrixXd m(rows.size(), rows.empty() ? 0 : rows.front().size());
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
    return m;
}

} // namespace fdilab
