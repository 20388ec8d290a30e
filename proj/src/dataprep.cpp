#include "tcam/dataprep.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "tcam/errors.hpp"

namespace tcam {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    if (quoted) throw InputError("csv: unterminated quoted field");
    fields.push_back(field);
    return fields;
}

std::vector<std::vector<std::string>> read_rows(std::istream& in) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        rows.push_back(split_csv_line(line));
    }
    if (rows.empty()) throw InputError("csv: missing header row");
    if (!rows[0].empty() && rows[0][0].rfind("\xEF\xBB\xBF", 0) == 0) rows[0][0].erase(0, 3);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        if (rows[r].size() != rows[0].size()) {
            throw InputError("csv: row " + std::to_string(r + 1) + " has " + std::to_string(rows[r].size()) +
                             " fields, header has " + std::to_string(rows[0].size()));
        }
    }
    return rows;
}

double parse_value(const std::string& text, std::size_t row, const std::string& column) {
    std::string trimmed = text;
    trimmed.erase(0, trimmed.find_first_not_of(" \t"));
    trimmed.erase(trimmed.find_last_not_of(" \t") + 1);
    if (trimmed.empty() || trimmed == "NA") return kMissing;
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(trimmed.c_str(), &end);
    if (end != trimmed.c_str() + trimmed.size() || errno == ERANGE || !std::isfinite(v)) {
        throw InputError("csv: non-numeric value '" + text + "' in column '" + column + "' at row " +
                         std::to_string(row + 1));
    }
    return v;
}

void check_unique(const std::vector<std::string>& names, const std::string& what) {
    std::set<std::string> seen;
    for (const auto& n : names) {
        if (!seen.insert(n).second) throw InputError(what + ": duplicate name '" + n + "'");
    }
}

std::string format_value(double v) {
    if (std::isnan(v)) return "NA";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ifstream open_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    return in;
}

// Positions sort numerically when both are integers, otherwise as strings.
bool position_less(const std::string& a, const std::string& b) {
    char* ea = nullptr;
    char* eb = nullptr;
    const long long ia = std::strtoll(a.c_str(), &ea, 10);
    const long long ib = std::strtoll(b.c_str(), &eb, 10);
    const bool na = !a.empty() && *ea == '\0';
    const bool nb = !b.empty() && *eb == '\0';
    if (na && nb) return ia != ib ? ia < ib : a < b;
    if (na != nb) return na;
    return a < b;
}

Dataset select_columns(const Dataset& data, const std::vector<std::size_t>& keep) {
    Dataset out;
    out.values.resize(data.values.rows(), static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) {
        out.values.col(static_cast<Eigen::Index>(j)) = data.values.col(static_cast<Eigen::Index>(keep[j]));
        out.columns.push_back(data.columns[keep[j]]);
        out.provenance.push_back(data.provenance[keep[j]]);
    }
    out.dropped = data.dropped;
    return out;
}

}  // namespace

Dataset Dataset::from_matrix(Eigen::MatrixXd values, std::vector<std::string> columns) {
    if (static_cast<std::size_t>(values.cols()) != columns.size()) {
        throw InputError("dataset: column name count does not match matrix");
    }
    check_unique(columns, "dataset");
    Dataset data;
    data.values = std::move(values);
    data.columns = std::move(columns);
    for (std::size_t j = 0; j < data.columns.size(); ++j) data.provenance.push_back({0, j});
    return data;
}

std::size_t Dataset::index_of(const std::string& name) const {
    auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw InputError("unknown column '" + name + "'");
    return static_cast<std::size_t>(it - columns.begin());
}

bool Dataset::has_missing() const { return values.hasNaN(); }

std::vector<std::size_t> Dataset::source_indices() const {
    std::vector<std::size_t> out;
    for (const auto& p : provenance) out.push_back(p.source_index);
    return out;
}

Dataset read_csv(std::istream& in) {
    const auto rows = read_rows(in);
    const auto& header = rows[0];
    Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size() - 1), static_cast<Eigen::Index>(header.size()));
    for (std::size_t r = 1; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < header.size(); ++c) {
            values(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(c)) = parse_value(rows[r][c], r, header[c]);
        }
    }
    return Dataset::from_matrix(std::move(values), header);
}

Dataset read_csv_file(const std::string& path) {
    auto in = open_file(path);
    return read_csv(in);
}

void write_csv(std::ostream& out, const Dataset& data) {
    for (std::size_t j = 0; j < data.columns.size(); ++j) out << (j ? "," : "") << data.columns[j];
    out << '\n';
    for (Eigen::Index i = 0; i < data.values.rows(); ++i) {
        for (Eigen::Index j = 0; j < data.values.cols(); ++j) out << (j ? "," : "") << format_value(data.values(i, j));
        out << '\n';
    }
}

Dataset impute_mean(const Dataset& data) {
    std::vector<std::size_t> keep;
    Dataset work = data;
    for (std::size_t j = 0; j < data.n_cols(); ++j) {
        auto col = work.values.col(static_cast<Eigen::Index>(j));
        double sum = 0.0;
        std::size_t observed = 0;
        for (Eigen::Index i = 0; i < col.size(); ++i) {
            if (!std::isnan(col[i])) {
                sum += col[i];
                ++observed;
            }
        }
        if (observed == 0) {
            work.dropped.push_back({data.columns[j], "all values missing"});
            continue;
        }
        const double mean = sum / static_cast<double>(observed);
        for (Eigen::Index i = 0; i < col.size(); ++i) {
            if (std::isnan(col[i])) col[i] = mean;
        }
        work.provenance[j].imputed_count += static_cast<std::size_t>(col.size()) - observed;
        keep.push_back(j);
    }
    return select_columns(work, keep);
}

Dataset drop_constant(const Dataset& data) {
    if (data.has_missing()) throw InputError("drop_constant: impute missing values first");
    std::vector<std::size_t> keep;
    Dataset work = data;
    for (std::size_t j = 0; j < data.n_cols(); ++j) {
        const auto col = data.values.col(static_cast<Eigen::Index>(j));
        if (col.size() == 0 || (col.array() == col[0]).all()) {
            work.dropped.push_back({data.columns[j], "constant"});
        } else {
            keep.push_back(j);
        }
    }
    return select_columns(work, keep);
}

Dataset standardize(const Dataset& data) {
    if (data.has_missing()) throw InputError("standardize: impute missing values first");
    Dataset out = data;
    const double n = static_cast<double>(data.n_rows());
    for (Eigen::Index j = 0; j < out.values.cols(); ++j) {
        auto col = out.values.col(j);
        const double mean = col.mean();
        col.array() -= mean;
        const double sd = std::sqrt(col.squaredNorm() / n);
        if (!(sd > 0.0)) throw ZeroVarianceError("standardize: column '" + data.columns[static_cast<std::size_t>(j)] + "' is constant");
        col /= sd;
    }
    return out;
}

Dataset prepare(const Dataset& raw) { return standardize(drop_constant(impute_mean(raw))); }

bool is_standardized(const Dataset& data, double tol) {
    const double n = static_cast<double>(data.n_rows());
    for (Eigen::Index j = 0; j < data.values.cols(); ++j) {
        const auto col = data.values.col(j);
        const double mean = col.mean();
        const double var = (col.array() - mean).square().sum() / n;
        if (std::abs(mean) > tol || std::abs(var - 1.0) > tol) return false;
    }
    return !data.has_missing();
}

std::size_t PartTable::row_of(const std::string& id) const {
    auto it = std::find(ids.begin(), ids.end(), id);
    return it == ids.end() ? npos : static_cast<std::size_t>(it - ids.begin());
}

PartTable read_part_table(std::istream& in) {
    const auto rows = read_rows(in);
    const auto& header = rows[0];
    if (header.empty()) throw InputError("part table: empty header");
    PartTable table;
    table.id_column = header[0];
    table.columns.assign(header.begin() + 1, header.end());
    check_unique(table.columns, "part table");
    table.values.resize(static_cast<Eigen::Index>(rows.size() - 1), static_cast<Eigen::Index>(table.columns.size()));
    for (std::size_t r = 1; r < rows.size(); ++r) {
        table.ids.push_back(rows[r][0]);
        for (std::size_t c = 1; c < header.size(); ++c) {
            table.values(static_cast<Eigen::Index>(r - 1), static_cast<Eigen::Index>(c - 1)) = parse_value(rows[r][c], r, header[c]);
        }
    }
    check_unique(table.ids, "part table ids");
    return table;
}

PartTable read_part_table_file(const std::string& path) {
    auto in = open_file(path);
    return read_part_table(in);
}

void write_part_table(std::ostream& out, const PartTable& table) {
    out << table.id_column;
    for (const auto& c : table.columns) out << ',' << c;
    out << '\n';
    for (std::size_t i = 0; i < table.ids.size(); ++i) {
        out << table.ids[i];
        for (Eigen::Index j = 0; j < table.values.cols(); ++j) out << ',' << format_value(table.values(static_cast<Eigen::Index>(i), j));
        out << '\n';
    }
}

std::vector<BomEntry> read_bom(std::istream& in) {
    const auto rows = read_rows(in);
    const auto& header = rows[0];
    auto find = [&](const std::string& name) {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw InputError("bom: missing column '" + name + "'");
        return static_cast<std::size_t>(it - header.begin());
    };
    const auto child = find("child_id");
    const auto mother = find("mother_id");
    const auto position = find("position");
    std::vector<BomEntry> out;
    for (std::size_t r = 1; r < rows.size(); ++r) out.push_back({rows[r][child], rows[r][mother], rows[r][position]});
    return out;
}

std::vector<BomEntry> read_bom_file(const std::string& path) {
    auto in = open_file(path);
    return read_bom(in);
}

MergeResult merge_bom(const PartTable& mother, const std::vector<PartTable>& children,
                      const std::vector<BomEntry>& bom) {
    MergeResult result;

    // child id -> (table, row)
    std::map<std::string, std::pair<std::size_t, std::size_t>> child_rows;
    for (std::size_t t = 0; t < children.size(); ++t) {
        for (std::size_t r = 0; r < children[t].ids.size(); ++r) {
            if (!child_rows.emplace(children[t].ids[r], std::make_pair(t, r)).second) {
                throw InputError("merge: child id '" + children[t].ids[r] + "' appears in more than one table");
            }
        }
    }

    std::set<std::pair<std::string, std::string>> occupied;
    std::set<std::string> placed;
    std::vector<const BomEntry*> used;
    for (const auto& entry : bom) {
        if (!occupied.emplace(entry.mother_id, entry.position).second) {
            throw DuplicatePositionError("merge: mother '" + entry.mother_id + "' has two children at position '" +
                                         entry.position + "'");
        }
        if (mother.row_of(entry.mother_id) == PartTable::npos) {
            result.warnings.push_back("bom row for child '" + entry.child_id + "' references unknown mother '" +
                                      entry.mother_id + "'");
            continue;
        }
        if (child_rows.find(entry.child_id) == child_rows.end()) {
            result.warnings.push_back("bom row references unknown child '" + entry.child_id + "'");
            continue;
        }
        placed.insert(entry.child_id);
        used.push_back(&entry);
    }
    for (const auto& [id, loc] : child_rows) {
        if (!placed.count(id)) result.warnings.push_back("orphan child '" + id + "' is not placed in any mother");
    }

    // Column layout: mother columns, then per position (sorted) the union of
    // the placed children's columns in table order.
    std::vector<std::string> positions;
    std::map<std::string, std::vector<std::string>> position_columns;
    for (const auto* entry : used) {
        const auto& table = children[child_rows[entry->child_id].first];
        auto& cols = position_columns[entry->position];
        if (cols.empty()) positions.push_back(entry->position);
        for (const auto& c : table.columns) {
            if (std::find(cols.begin(), cols.end(), c) == cols.end()) cols.push_back(c);
        }
    }
    std::sort(positions.begin(), positions.end(), position_less);

    PartTable& out = result.table;
    out.id_column = mother.id_column;
    out.ids = mother.ids;
    out.columns = mother.columns;
    std::map<std::pair<std::string, std::string>, std::size_t> column_index;
    for (const auto& pos : positions) {
        for (const auto& c : position_columns[pos]) {
            column_index[{pos, c}] = out.columns.size();
            out.columns.push_back(pos + "." + c);
        }
    }
    check_unique(out.columns, "merged table");

    out.values = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(out.ids.size()),
                                           static_cast<Eigen::Index>(out.columns.size()), kMissing);
    out.values.leftCols(mother.values.cols()) = mother.values;
    for (const auto* entry : used) {
        const auto row = static_cast<Eigen::Index>(mother.row_of(entry->mother_id));
        const auto [t, r] = child_rows[entry->child_id];
        const auto& table = children[t];
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            const auto col = static_cast<Eigen::Index>(column_index[{entry->position, table.columns[c]}]);
            out.values(row, col) = table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        }
    }
    return result;
}

Dataset to_dataset(const PartTable& table) { return Dataset::from_matrix(table.values, table.columns); }

}  // namespace tcam
