#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace leakage {

enum class RowSense { LessEqual, Equal, GreaterEqual };

// Sparse linear program with named rows and columns.
//
//   minimise    objective . x
//   subject to  row_lower <=> A x (sense per row, rhs)
//               col_lower <= x <= col_upper
//
// Names are unique and structured, e.g. "bal[DE,17]" or "cap[SC,wind]".
class LinearProgram {
public:
    struct Entry {
        int row;
        int col;
        double value;
    };

    int add_column(std::string name, double lower, double upper, double objective_coeff);
    int add_row(std::string name, RowSense sense, double rhs);
    void add_entry(int row, int col, double value);
    void set_rhs(int row, double rhs) { rhs_.at(std::size_t(row)) = rhs; }

    int num_columns() const { return int(col_names_.size()); }
    int num_rows() const { return int(row_names_.size()); }

    int column_index(std::string_view name) const;  // -1 if absent
    int row_index(std::string_view name) const;     // -1 if absent

    const std::string& column_name(int j) const { return col_names_[std::size_t(j)]; }
    const std::string& row_name(int i) const { return row_names_[std::size_t(i)]; }

    const std::vector<double>& objective() const { return objective_; }
    const std::vector<double>& column_lower() const { return col_lower_; }
    const std::vector<double>& column_upper() const { return col_upper_; }
    const std::vector<RowSense>& row_sense() const { return row_sense_; }
    const std::vector<double>& rhs() const { return rhs_; }
    const std::vector<Entry>& entries() const { return entries_; }

    // Throws DataError on non-finite coefficients, duplicate (row, col) pairs,
    // crossed bounds, or columns never referenced by a row or a finite bound.
    void validate() const;

private:
    std::vector<std::string> col_names_;
    std::vector<double> col_lower_, col_upper_, objective_;
    std::vector<std::string> row_names_;
    std::vector<RowSense> row_sense_;
    std::vector<double> rhs_;
    std::vector<Entry> entries_;
    std::unordered_map<std::string, int> col_lookup_, row_lookup_;
};

}  // namespace leakage
