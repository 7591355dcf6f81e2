#include "mps.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include "common.hpp"
#include "csv.hpp"

namespace leakage::mps {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_name(const std::string& name) {
    if (name.empty() || name.find_first_of(" \t") != std::string::npos)
        throw DataError("mps: name '" + name + "' cannot be represented in free format");
}

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

}  // namespace

std::string to_string(const LinearProgram& lp, const std::string& problem_name) {
    std::string s;
    s += "NAME " + problem_name + "\n";
    s += "ROWS\n";
    s += " N COST\n";
    for (int i = 0; i < lp.num_rows(); ++i) {
        check_name(lp.row_name(i));
        char sense = 'E';
        switch (lp.row_sense()[std::size_t(i)]) {
            case RowSense::LessEqual: sense = 'L'; break;
            case RowSense::GreaterEqual: sense = 'G'; break;
            case RowSense::Equal: sense = 'E'; break;
        }
        s += std::string(" ") + sense + " " + lp.row_name(i) + "\n";
    }

    // column-major entry order, rows in emission order within a column
    std::vector<LinearProgram::Entry> entries = lp.entries();
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& a, const auto& b) { return a.col < b.col; });

    s += "COLUMNS\n";
    std::size_t pos = 0;
    for (int j = 0; j < lp.num_columns(); ++j) {
        check_name(lp.column_name(j));
        double obj = lp.objective()[std::size_t(j)];
        if (obj != 0.0)
            s += "    " + lp.column_name(j) + " COST " + csv::format_double(obj) + "\n";
        while (pos < entries.size() && entries[pos].col == j) {
            s += "    " + lp.column_name(j) + " " + lp.row_name(entries[pos].row) + " " +
                 csv::format_double(entries[pos].value) + "\n";
            ++pos;
        }
    }

    s += "RHS\n";
    for (int i = 0; i < lp.num_rows(); ++i) {
        double b = lp.rhs()[std::size_t(i)];
        if (b != 0.0) s += "    RHS " + lp.row_name(i) + " " + csv::format_double(b) + "\n";
    }

    s += "BOUNDS\n";
    for (int j = 0; j < lp.num_columns(); ++j) {
        double lo = lp.column_lower()[std::size_t(j)], up = lp.column_upper()[std::size_t(j)];
        const std::string& name = lp.column_name(j);
        if (lo == 0.0 && up == kInf) continue;
        if (lo == up) {
            s += " FX BND " + name + " " + csv::format_double(lo) + "\n";
            continue;
        }
        if (lo == -kInf && up == kInf) {
            s += " FR BND " + name + "\n";
            continue;
        }
        if (lo == -kInf) s += " MI BND " + name + "\n";
        else if (lo != 0.0) s += " LO BND " + name + " " + csv::format_double(lo) + "\n";
        if (up != kInf) s += " UP BND " + name + " " + csv::format_double(up) + "\n";
    }
    s += "ENDATA\n";
    return s;
}

void write_file(const LinearProgram& lp, const std::filesystem::path& path,
                const std::string& problem_name) {
    csv::write_file_atomic(path, to_string(lp, problem_name));
}

namespace {

// Mutable construction buffer; LinearProgram is assembled at the end so its
// class invariants never see half-parsed state.
struct Builder {
    std::vector<std::string> row_names;
    std::vector<RowSense> senses;
    std::vector<double> rhs;
    std::vector<std::string> col_names;
    std::vector<double> lo, up, obj;
    std::vector<LinearProgram::Entry> entries;
    std::unordered_map<std::string, int> rows, cols;

    int row(const std::string& name) const {
        auto it = rows.find(name);
        return it == rows.end() ? -1 : it->second;
    }
    int col(const std::string& name) const {
        auto it = cols.find(name);
        return it == cols.end() ? -1 : it->second;
    }
    int add_col(const std::string& name) {
        int j = int(col_names.size());
        cols.emplace(name, j);
        col_names.push_back(name);
        lo.push_back(0.0);
        up.push_back(kInf);
        obj.push_back(0.0);
        return j;
    }
};

}  // namespace

LinearProgram parse(const std::string& text) {
    Builder bld;
    enum Section { None, Rows, Columns, Rhs, Bounds, Done } section = None;
    std::string objective_name;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;

    auto fail = [&](const std::string& what) -> double {
        throw DataError("mps:" + std::to_string(line_no) + ": " + what);
    };
    auto parse_value = [&](const std::string& tok) {
        double v;
        if (!csv::parse_double(tok, v)) fail("cannot parse number '" + tok + "'");
        return v;
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '*') continue;
        bool header = line[0] != ' ' && line[0] != '\t';
        std::vector<std::string> tok = tokenize(line);
        if (tok.empty()) continue;

        if (header) {
            const std::string& kw = tok[0];
            if (kw == "NAME") section = None;
            else if (kw == "ROWS") section = Rows;
            else if (kw == "COLUMNS") section = Columns;
            else if (kw == "RHS") section = Rhs;
            else if (kw == "BOUNDS") section = Bounds;
            else if (kw == "ENDATA") { section = Done; break; }
            else if (kw == "RANGES") fail("RANGES section is not supported");
            else fail("unsupported section '" + kw + "'");
            continue;
        }

        switch (section) {
            case Rows: {
                if (tok.size() != 2) fail("rows section expects 'sense name'");
                const std::string& sense = tok[0];
                if (sense == "N") {
                    if (!objective_name.empty()) fail("multiple objective rows");
                    objective_name = tok[1];
                } else {
                    RowSense rs;
                    if (sense == "E") rs = RowSense::Equal;
                    else if (sense == "L") rs = RowSense::LessEqual;
                    else if (sense == "G") rs = RowSense::GreaterEqual;
                    else { fail("unknown row sense '" + sense + "'"); break; }
                    if (bld.row(tok[1]) >= 0 || tok[1] == objective_name)
                        fail("duplicate row '" + tok[1] + "'");
                    bld.rows.emplace(tok[1], int(bld.row_names.size()));
                    bld.row_names.push_back(tok[1]);
                    bld.senses.push_back(rs);
                    bld.rhs.push_back(0.0);
                }
                break;
            }
            case Columns: {
                if (tok.size() >= 3 && tok[1] == "'MARKER'")
                    fail("integer markers are not supported");
                if (tok.size() != 3 && tok.size() != 5)
                    fail("columns section expects 'col row value [row value]'");
                int j = bld.col(tok[0]);
                if (j < 0) j = bld.add_col(tok[0]);
                for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
                    double v = parse_value(tok[k + 1]);
                    if (tok[k] == objective_name) {
                        bld.obj[std::size_t(j)] = v;
                    } else {
                        int i = bld.row(tok[k]);
                        if (i < 0) fail("unknown row '" + tok[k] + "'");
                        bld.entries.push_back({i, j, v});
                    }
                }
                break;
            }
            case Rhs: {
                if (tok.size() != 3 && tok.size() != 5) fail("rhs section expects 'set row value'");
                for (std::size_t k = 1; k + 1 < tok.size(); k += 2) {
                    int i = bld.row(tok[k]);
                    if (i < 0) {
                        if (tok[k] == objective_name) continue;  // objective offsets unused
                        fail("unknown row '" + tok[k] + "' in RHS");
                    }
                    bld.rhs[std::size_t(i)] = parse_value(tok[k + 1]);
                }
                break;
            }
            case Bounds: {
                if (tok.size() < 3) fail("bounds section expects 'type set column [value]'");
                const std::string& type = tok[0];
                int j = bld.col(tok[2]);
                if (j < 0) fail("unknown column '" + tok[2] + "' in BOUNDS");
                if (type == "UP") bld.up[std::size_t(j)] = parse_value(tok.at(3));
                else if (type == "LO") bld.lo[std::size_t(j)] = parse_value(tok.at(3));
                else if (type == "FX") bld.lo[std::size_t(j)] = bld.up[std::size_t(j)] = parse_value(tok.at(3));
                else if (type == "FR") { bld.lo[std::size_t(j)] = -kInf; bld.up[std::size_t(j)] = kInf; }
                else if (type == "MI") bld.lo[std::size_t(j)] = -kInf;
                else if (type == "PL") bld.up[std::size_t(j)] = kInf;
                else fail("unsupported bound type '" + type + "'");
                break;
            }
            default:
                fail("data line outside of a section");
        }
    }
    if (section != Done) throw DataError("mps: missing ENDATA");
    if (objective_name.empty()) throw DataError("mps: no objective (N) row");

    LinearProgram lp;
    for (std::size_t i = 0; i < bld.row_names.size(); ++i)
        lp.add_row(bld.row_names[i], bld.senses[i], bld.rhs[i]);
    for (std::size_t j = 0; j < bld.col_names.size(); ++j)
        lp.add_column(bld.col_names[j], bld.lo[j], bld.up[j], bld.obj[j]);
    for (const auto& e : bld.entries) lp.add_entry(e.row, e.col, e.value);
    lp.validate();
    return lp;
}

LinearProgram read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(path.string() + ": cannot open file");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string solution_to_csv(const LinearProgram& lp, const Solution& solution) {
    std::string s = "#objective," + csv::format_double(solution.objective) + "\n";
    s += "name,value,dual\n";
    for (int j = 0; j < lp.num_columns(); ++j) {
        double reduced =
            j < int(solution.reduced_cost.size()) ? solution.reduced_cost[std::size_t(j)] : 0.0;
        s += lp.column_name(j) + "," + csv::format_double(solution.primal[std::size_t(j)]) + "," +
             csv::format_double(reduced) + "\n";
    }
    // row activities are recomputable but handy for inspection
    std::vector<double> activity(std::size_t(lp.num_rows()), 0.0);
    for (const auto& e : lp.entries())
        activity[std::size_t(e.row)] += e.value * solution.primal[std::size_t(e.col)];
    for (int i = 0; i < lp.num_rows(); ++i) {
        s += lp.row_name(i) + "," + csv::format_double(activity[std::size_t(i)]) + "," +
             csv::format_double(solution.dual[std::size_t(i)]) + "\n";
    }
    return s;
}

void write_solution(const LinearProgram& lp, const Solution& solution,
                    const std::filesystem::path& path) {
    csv::write_file_atomic(path, solution_to_csv(lp, solution));
}

Solution read_solution(const std::filesystem::path& path, const LinearProgram& lp,
                       double feasibility, double gap) {
    std::ifstream in(path);
    if (!in) throw DataError(path.string() + ": cannot open file");
    std::string file = path.filename().string();

    Solution sol;
    sol.status = SolveStatus::Optimal;
    sol.primal.assign(std::size_t(lp.num_columns()), 0.0);
    sol.dual.assign(std::size_t(lp.num_rows()), 0.0);
    sol.reduced_cost.assign(std::size_t(lp.num_columns()), 0.0);
    std::vector<char> col_seen(std::size_t(lp.num_columns()), 0);

    bool have_objective = false;
    double claimed_objective = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line.rfind("#objective,", 0) == 0) {
                if (!csv::parse_double(line.substr(11), claimed_objective))
                    throw DataError(file + ":" + std::to_string(line_no) + ": bad objective value");
                have_objective = true;
            }
            continue;
        }
        if (line == "name,value,dual") continue;
        // names may contain commas; value and dual are the last two fields
        auto c2 = line.rfind(',');
        auto c1 = c2 == std::string::npos || c2 == 0 ? std::string::npos : line.rfind(',', c2 - 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw DataError(file + ":" + std::to_string(line_no) + ": expected name,value,dual");
        std::string name = line.substr(0, c1);
        double value, dual;
        if (!csv::parse_double(line.substr(c1 + 1, c2 - c1 - 1), value) ||
            !csv::parse_double(line.substr(c2 + 1), dual))
            throw DataError(file + ":" + std::to_string(line_no) + ": bad number");
        int j = lp.column_index(name);
        if (j >= 0) {
            sol.primal[std::size_t(j)] = value;
            sol.reduced_cost[std::size_t(j)] = dual;
            col_seen[std::size_t(j)] = 1;
            continue;
        }
        int i = lp.row_index(name);
        if (i >= 0) {
            sol.dual[std::size_t(i)] = dual;
            continue;
        }
        throw DataError(file + ":" + std::to_string(line_no) + ": unknown name '" + name + "'");
    }
    for (int j = 0; j < lp.num_columns(); ++j) {
        if (!col_seen[std::size_t(j)])
            throw DataError(file + ": missing column " + lp.column_name(j));
    }

    double objective = 0;
    for (int j = 0; j < lp.num_columns(); ++j)
        objective += lp.objective()[std::size_t(j)] * sol.primal[std::size_t(j)];
    sol.objective = objective;
    if (have_objective &&
        std::abs(claimed_objective - objective) > 1e-6 * (1.0 + std::abs(objective)))
        throw DataError(file + ": declared objective " + csv::format_double(claimed_objective) +
                        " does not match recomputed " + csv::format_double(objective));

    VerifyReport report = verify(lp, sol);
    if (!report.acceptable(feasibility, gap))
        throw DataError(file + ": imported point fails verification: " + report.describe());
    return sol;
}

}  // namespace leakage::mps
