#include "fdilab/casefile.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace fdilab {
namespace {

struct Token {
    std::string text;
    int line;
};

// Strip MATLAB comments and split into whitespace/punctuation tokens,
// keeping '[' ']' ';' '=' as their own tokens.
std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> out;
    int line = 1;
    std::string cur;
    int cur_line = 1;
    auto flush = [&] {
        if (!cur.empty()) {
            out.push_back({cur, cur_line});
            cur.clear();
        }
    };
    for (size_t i = 0; i < text.size(); ++i) {
        char ch = text[i];
        if (ch == '%') { // comment to end of line
            flush();
            while (i < text.size() && text[i] != '\n') ++i;
            --i;
            continue;
        }
        if (ch == '\n') {
            flush();
            ++line;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(ch)) || ch == ',') {
            flush();
            continue;
        }
        if (ch == '[' || ch == ']' || ch == ';' || ch == '=') {
            flush();
            out.push_back({std::string(1, ch), line});
            continue;
        }
        if (cur.empty()) cur_line = line;
        cur += ch;
    }
    flush();
    return out;
}

double parse_number(const Token& tok) {
    const std::string& s = tok.text;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw ParseError("malformed numeric field '" + s + "'", tok.line);
    return value;
}

bool ends_with(const std::string& s, std::string_view suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Rows of a bracketed matrix: numbers separated by whitespace, rows
// terminated by ';' or a line break.
std::vector<std::vector<Token>> read_matrix(const std::vector<Token>& toks, size_t& i) {
    if (i >= toks.size() || toks[i].text != "[")
        throw ParseError("expected '[' to open a matrix", i < toks.size() ? toks[i].line : 0);
    ++i;
    std::vector<std::vector<Token>> rows;
    std::vector<Token> row;
    int row_line = i < toks.size() ? toks[i].line : 0;
    auto flush_row = [&] {
        if (!row.empty()) {
            rows.push_back(row);
            row.clear();
        }
    };
    for (; i < toks.size(); ++i) {
        const Token& t = toks[i];
        if (t.text == "]") {
            flush_row();
            ++i;
            return rows;
        }
        if (t.text == ";") {
            flush_row();
            continue;
        }
        if (!row.empty() && t.line != row_line) flush_row();
        if (row.empty()) row_line = t.line;
        row.push_back(t);
    }
    throw ParseError("unterminated matrix (missing ']')", row_line);
}

BusType bus_type_from_code(double code, int line) {
    int c = static_cast<int>(code);
    switch (c) {
    case 1: return BusType::pq;
    case 2: return BusType::pv;
    case 3: return BusType::reference;
    default: throw ParseError("unsupported bus type code " + std::to_string(c), line);
    }
}

void validate(const GridCase& c) {
    if (c.buses.empty()) throw ValidationError("case has no buses");
    std::unordered_set<int> ids;
    int refs = 0;
    for (const auto& b : c.buses) {
        if (!ids.insert(b.id).second)
            throw ValidationError("duplicate bus id " + std::to_string(b.id));
        if (b.type == BusType::reference) ++refs;
    }
    if (refs != 1)
        throw ValidationError("expected exactly one reference bus, found " + std::to_string(refs));
    for (const auto& br : c.branches) {
        if (!ids.count(br.from) || !ids.count(br.to))
            throw ValidationError("branch " + std::to_string(br.from) + "-" +
                                  std::to_string(br.to) + " references an unknown bus");
        if (br.reactance_x == 0.0)
            throw ValidationError("branch " + std::to_string(br.from) + "-" +
                                  std::to_string(br.to) + " has zero reactance");
    }
    // Connectivity over in-service branches (union-find).
    std::unordered_map<int, int> parent;
    for (const auto& b : c.buses) parent[b.id] = b.id;
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& br : c.branches) {
        if (br.status != BranchStatus::in_service) continue;
        parent[find(br.from)] = find(br.to);
    }
    const int root = find(c.buses.front().id);
    for (const auto& b : c.buses)
        if (find(b.id) != root)
            throw ValidationError("network is disconnected (bus " + std::to_string(b.id) +
                                  " unreachable over in-service branches)");
}

} // namespace

int GridCase::bus_index(int id) const {
    for (size_t i = 0; i < buses.size(); ++i)
        if (buses[i].id == id) return static_cast<int>(i);
    return -1;
}

int GridCase::in_service_branch_count() const {
    return static_cast<int>(std::count_if(branches.begin(), branches.end(), [](const BranchRecord& b) {
        return b.status == BranchStatus::in_service;
    }));
}

GridCase parse_case(std::string_view text) {
    const auto toks = tokenize(text);
    GridCase c;
    bool saw_base = false, saw_bus = false, saw_branch = false;

    for (size_t i = 0; i < toks.size();) {
        const std::string& name = toks[i].text;
        const bool assign = i + 1 < toks.size() && toks[i + 1].text == "=";
        if (assign && ends_with(name, ".baseMVA")) {
            i += 2;
            if (i >= toks.size()) throw ParseError("missing baseMVA value", toks[i - 1].line);
            c.base_mva = parse_number(toks[i]);
            saw_base = true;
            ++i;
        } else if (assign && ends_with(name, ".bus")) {
            i += 2;
            for (const auto& row : read_matrix(toks, i)) {
                if (row.size() < 3)
                    throw ParseError("bus row needs at least id, type, Pd", row.front().line);
                BusRecord b;
                b.id = static_cast<int>(parse_number(row[0]));
                b.type = bus_type_from_code(parse_number(row[1]), row[1].line);
                b.p_injection = parse_number(row[2]);
                c.buses.push_back(b);
            }
            saw_bus = true;
        } else if (assign && ends_with(name, ".branch")) {
            i += 2;
            for (const auto& row : read_matrix(toks, i)) {
                if (row.size() < 4)
                    throw ParseError("branch row needs at least from, to, x, status", row.front().line);
                BranchRecord br;
                br.from = static_cast<int>(parse_number(row[0]));
                br.to = static_cast<int>(parse_number(row[1]));
                // Full MATPOWER rows carry x in column 4 and status in
                // column 11; the minimal subset uses columns 3 and 4.
                if (row.size() >= 11) {
                    br.reactance_x = parse_number(row[3]);
                    br.status = parse_number(row[10]) != 0.0 ? BranchStatus::in_service
                                                             : BranchStatus::out;
                } else {
                    br.reactance_x = parse_number(row[2]);
                    br.status = parse_number(row[3]) != 0.0 ? BranchStatus::in_service
                                                            : BranchStatus::out;
                }
                c.branches.push_back(br);
            }
            saw_branch = true;
        } else {
            ++i;
        }
    }

    if (!saw_base) throw ParseError("no baseMVA assignment found", 1);
    if (!saw_bus) throw ParseError("no bus matrix found", 1);
    if (!saw_branch) throw ParseError("no branch matrix found", 1);

    for (const auto& b : c.buses)
        if (b.type == BusType::reference) c.reference_bus = b.id;
    validate(c);
    return c;
}

GridCase parse_case(std::istream& in) {
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_case(std::string_view(ss.str()));
}

GridCase load_case(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open case file: " + path.string());
    return parse_case(f);
}

std::string render_case(const GridCase& c) {
    std::ostringstream out;
    out.precision(12);
    out << "function mpc = gridcase\n";
    out << "mpc.baseMVA = " << c.base_mva << ";\n";
    out << "mpc.bus = [\n";
    for (const auto& b : c.buses) {
        int code = b.type == BusType::reference ? 3 : (b.type == BusType::pv ? 2 : 1);
        out << "\t" << b.id << "\t" << code << "\t" << b.p_injection << ";\n";
    }
    out << "];\n";
    out << "mpc.branch = [\n";
    for (const auto& br : c.branches)
        out << "\t" << br.from << "\t" << br.to << "\t" << br.reactance_x << "\t"
            << (br.status == BranchStatus::in_service ? 1 : 0) << ";\n";
    out << "];\n";
    return out.str();
}

int sensor_count(const GridCase& c) {
    return 2 * c.in_service_branch_count() + static_cast<int>(c.buses.size());
}

} // namespace fdilab
