#include "lp.hpp"

#include <cmath>
#include <set>

#include "common.hpp"

namespace leakage {

int LinearProgram::add_column(std::string name, double lower, double upper,
                              double objective_coeff) {
    int idx = int(col_names_.size());
    auto [it, inserted] = col_lookup_.emplace(name, idx);
    (void)it;
    if (!inserted) throw DataError("duplicate column name " + name);
    col_names_.push_back(std::move(name));
    col_lower_.push_back(lower);
    col_upper_.push_back(upper);
    objective_.push_back(objective_coeff);
    return idx;
}

int LinearProgram::add_row(std::string name, RowSense sense, double rhs) {
    int idx = int(row_names_.size());
    auto [it, inserted] = row_lookup_.emplace(name, idx);
    (void)it;
    if (!inserted) throw DataError("duplicate row name " + name);
    row_names_.push_back(std::move(name));
    row_sense_.push_back(sense);
    rhs_.push_back(rhs);
    return idx;
}

void LinearProgram::add_entry(int row, int col, double value) {
    entries_.push_back({row, col, value});
}

int LinearProgram::column_index(std::string_view name) const {
    auto it = col_lookup_.find(std::string(name));
    return it == col_lookup_.end() ? -1 : it->second;
}

int LinearProgram::row_index(std::string_view name) const {
    auto it = row_lookup_.find(std::string(name));
    return it == row_lookup_.end() ? -1 : it->second;
}

void LinearProgram::validate() const {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<char> referenced(col_names_.size(), 0);
    std::set<std::pair<int, int>> seen;
    for (const auto& e : entries_) {
        if (e.row < 0 || e.row >= num_rows() || e.col < 0 || e.col >= num_columns())
            throw DataError("coefficient references unknown row or column");
        if (!std::isfinite(e.value))
            throw DataError("non-finite coefficient in row " + row_names_[std::size_t(e.row)]);
        if (!seen.insert({e.row, e.col}).second)
            throw DataError("duplicate coefficient for row " + row_names_[std::size_t(e.row)] +
                            ", column " + col_names_[std::size_t(e.col)]);
        referenced[std::size_t(e.col)] = 1;
    }
    for (int j = 0; j < num_columns(); ++j) {
        double lo = col_lower_[std::size_t(j)], up = col_upper_[std::size_t(j)];
        if (std::isnan(lo) || std::isnan(up) || lo > up)
            throw DataError("column " + col_names_[std::size_t(j)] + ": invalid bounds");
        if (!std::isfinite(objective_[std::size_t(j)]))
            throw DataError("column " + col_names_[std::size_t(j)] + ": non-finite objective");
        bool has_finite_bound = (lo != -inf && lo != 0.0) || up != inf;
        if (!referenced[std::size_t(j)] && !has_finite_bound && objective_[std::size_t(j)] == 0.0)
            throw DataError("column " + col_names_[std::size_t(j)] +
                            " is referenced by no row, bound or objective");
    }
    for (int i = 0; i < num_rows(); ++i) {
        if (!std::isfinite(rhs_[std::size_t(i)]))
            throw DataError("row " + row_names_[std::size_t(i)] + ": non-finite rhs");
        if (col_lookup_.count(row_names_[std::size_t(i)]))
            throw DataError("name " + row_names_[std::size_t(i)] +
                            " is used for both a row and a column");
    }
}

}  // namespace leakage
