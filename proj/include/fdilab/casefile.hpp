#pragma once

#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fdilab {

/// Thrown when the case text cannot be tokenized into the expected
/// baseMVA/bus/branch structure. Carries the 1-based source line.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

/// Thrown when the parsed network violates a structural requirement
/// (no/multiple reference buses, dangling branch endpoints, zero
/// reactance, disconnected graph).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class BusType { reference, pv, pq };
enum class BranchStatus { in_service, out };

struct BusRecord {
    int id = 0;
    BusType type = BusType::pq;
    double p_injection = 0.0; // MW at the operating point
};

struct BranchRecord {
    int from = 0;
    int to = 0;
    double reactance_x = 0.0; // per-unit
    BranchStatus status = BranchStatus::in_service;
};

/// Validated in-memory network model. Bus and branch order is the file
/// order; sensor indexing downstream depends on it.
struct GridCase {
    double base_mva = 100.0;
    std::vector<BusRecord> buses;
    std::vector<BranchRecord> branches;
    int reference_bus = 0;

    /// Index of a bus id in `buses`, or -1. Ids may be non-consecutive.
    int bus_index(int id) const;

    int in_service_branch_count() const;
    int state_count() const { return static_cast<int>(buses.size()) - 1; }
};

/// Parse a MATPOWER-style case. Only the DC subset is read: the baseMVA
/// scalar, bus rows (id, type, Pd) and branch rows (from, to, x, status).
/// Rows may be in the minimal 3/4-column layout or full MATPOWER width;
/// extra columns are ignored.
GridCase parse_case(std::istream& in);
GridCase parse_case(std::string_view text);
GridCase load_case(const std::filesystem::path& path);

/// Canonical writer for the parsed subset; parse(render(c)) == c.
std::string render_case(const GridCase& c);

/// Number of measurement sensors: one incoming-flow and one
/// outgoing-flow sensor per in-service branch plus one injection
/// sensor per bus.
int sensor_count(const GridCase& c);

} // namespace fdilab
