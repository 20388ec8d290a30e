#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tcam {

struct ColumnProvenance {
    std::size_t imputed_count = 0;
    // Column position in the file the dataset was read from.
    std::size_t source_index = 0;
};

struct DroppedColumn {
    std::string name;
    std::string reason;
};

// N observations x p variables, column-major. Missing entries are NaN.
struct Dataset {
    Eigen::MatrixXd values;
    std::vector<std::string> columns;
    std::vector<ColumnProvenance> provenance;
    std::vector<DroppedColumn> dropped;

    static Dataset from_matrix(Eigen::MatrixXd values, std::vector<std::string> columns);

    std::size_t n_rows() const { return static_cast<std::size_t>(values.rows()); }
    std::size_t n_cols() const { return static_cast<std::size_t>(values.cols()); }
    Eigen::VectorXd column(std::size_t j) const { return values.col(static_cast<Eigen::Index>(j)); }
    std::size_t index_of(const std::string& name) const;
    bool has_missing() const;

    // Indices into the originally loaded columns, in current column order.
    std::vector<std::size_t> source_indices() const;
};

// CSV with a header row; empty fields and the literal NA are missing values.
Dataset read_csv(std::istream& in);
Dataset read_csv_file(const std::string& path);
void write_csv(std::ostream& out, const Dataset& data);

// Each missing entry becomes its column's observed mean. Columns with no
// observed value are dropped and recorded in `dropped`.
Dataset impute_mean(const Dataset& data);

// Removes columns with a single distinct value. Requires no missing values.
Dataset drop_constant(const Dataset& data);

// Centers and scales each column with the population (1/N) standard
// deviation. Throws ZeroVarianceError on a constant column.
Dataset standardize(const Dataset& data);

// impute_mean -> drop_constant -> standardize.
Dataset prepare(const Dataset& raw);

bool is_standardized(const Dataset& data, double tol = 1e-8);

// Measurements of one kind of part, keyed by part identifier.
struct PartTable {
    std::string id_column = "id";
    std::vector<std::string> ids;
    std::vector<std::string> columns;
    Eigen::MatrixXd values;  // ids.size() x columns.size()

    std::size_t row_of(const std::string& id) const;  // npos if absent
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

// First CSV column is the part identifier, the rest are measurements.
PartTable read_part_table(std::istream& in);
PartTable read_part_table_file(const std::string& path);
void write_part_table(std::ostream& out, const PartTable& table);

struct BomEntry {
    std::string child_id;
    std::string mother_id;
    std::string position;
};

// CSV with columns child_id, mother_id, position (any column order).
std::vector<BomEntry> read_bom(std::istream& in);
std::vector<BomEntry> read_bom_file(const std::string& path);

struct MergeResult {
    PartTable table;
    std::vector<std::string> warnings;
};

// Widens the mother table with the measurements of every child placed in it.
// Child columns are named "<position>.<column>"; a mother lacking a child at
// some position gets missing values there. Children that no BoM row places
// are skipped with a warning. Two BoM rows with the same mother and position
// throw DuplicatePositionError.
MergeResult merge_bom(const PartTable& mother, const std::vector<PartTable>& children,
                      const std::vector<BomEntry>& bom);

// Dataset view of a part table (identifier column dropped).
Dataset to_dataset(const PartTable& table);

}  // namespace tcam
