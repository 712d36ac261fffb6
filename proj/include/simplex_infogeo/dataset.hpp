#pragma once

#include <Eigen/Core>

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <string>
#include <vector>

#include "simplex_infogeo/composition.hpp"
#include "simplex_infogeo/errors.hpp"

namespace sig {

/// What to do with zero cells: reject the file, or substitute epsilon and
/// re-close the row. Rejection is the default; substitution changes results.
struct ZeroPolicy {
    enum class Kind { error, replace };
    Kind kind = Kind::error;
    double epsilon = 0.0;

    static ZeroPolicy error() { return {Kind::error, 0.0}; }
    static ZeroPolicy replace(double eps) {
        if (!(eps > 0.0)) throw ParameterOutOfRange("replacement epsilon must be > 0");
        return {Kind::replace, eps};
    }

    /// Parse "error" or "replace:<eps>".
    static ZeroPolicy parse(const std::string& text) {
        if (text == "error") return error();
        const std::string prefix = "replace:";
        if (text.rfind(prefix, 0) == 0) {
            const std::string eps_text = text.substr(prefix.size());
            try {
                return replace(std::stod(eps_text));
            } catch (const std::exception&) {
                throw ParameterOutOfRange("cannot parse zero-policy epsilon '" + eps_text + "'");
            }
        }
        throw ParameterOutOfRange("zero policy must be 'error' or 'replace:<eps>'");
    }
};

/// A rectangular batch of closed compositions with row and column labels.
struct Dataset {
    std::vector<std::string> part_names;
    std::vector<std::string> sample_ids;
    std::vector<Composition> samples;

    int dim() const { return static_cast<int>(part_names.size()); }
    int size() const { return static_cast<int>(samples.size()); }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string::size_type start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string::npos) {
            cells.push_back(trim(line.substr(start)));
            break;
        }
        cells.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return cells;
}

inline double parse_cell(const std::string& cell, int row, int col) {
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end)
        throw ParseError("cannot parse '" + cell + "' as a number", row, col);
    if (!std::isfinite(value)) throw ParseError("non-finite value '" + cell + "'", row, col);
    if (value < 0.0) throw ParseError("negative value '" + cell + "'", row, col);
    return value;
}

}  // namespace detail

/// Parse a CSV stream: header row of part names with a leading id column,
/// then one sample per row. Rows are closed to compositions after the zero
/// policy is applied. Row/column numbers in errors are 1-based file positions.
inline Dataset parse_csv(std::istream& in, const ZeroPolicy& policy) {
    Dataset ds;
    std::string line;
    int row = 0;
    int dim = -1;
    while (std::getline(in, line)) {
        ++row;
        if (detail::trim(line).empty()) continue;
        const std::vector<std::string> cells = detail::split_csv_line(line);
        if (row == 1) {
            if (cells.size() < 3)
                throw ParseError("header needs an id column and at least 2 part names", 1,
                                 static_cast<int>(cells.size()));
            ds.part_names.assign(cells.begin() + 1, cells.end());
            dim = static_cast<int>(ds.part_names.size());
            continue;
        }
        if (static_cast<int>(cells.size()) != dim + 1)
            throw RaggedRows("row " + std::to_string(row) + " has " +
                             std::to_string(cells.size()) + " cells, expected " +
                             std::to_string(dim + 1));
        const std::string& id = cells[0];
        Eigen::VectorXd parts(dim);
        for (int j = 0; j < dim; ++j) {
            double v = detail::parse_cell(cells[j + 1], row, j + 2);
            if (v == 0.0) {
                if (policy.kind == ZeroPolicy::Kind::error)
                    throw ZeroPartError(id, ds.part_names[j]);
                v = policy.epsilon;
            }
            parts[j] = v;
        }
        ds.sample_ids.push_back(id);
        ds.samples.push_back(close(parts));
    }
    if (dim < 0) throw ParseError("empty input", 1, 1);
    return ds;
}

/// Read and parse a CSV file.
inline Dataset ingest_csv(const std::string& path, const ZeroPolicy& policy) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'", 0, 0);
    return parse_csv(in, policy);
}

/// Numeric matrix file: comma-separated rows, no header. Used for
/// user-supplied contrast matrices.
inline Eigen::MatrixXd read_matrix_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'", 0, 0);
    std::vector<std::vector<double>> rows;
    std::string line;
    int row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (detail::trim(line).empty()) continue;
        const std::vector<std::string> cells = detail::split_csv_line(line);
        std::vector<double> values;
        values.reserve(cells.size());
        for (std::size_t j = 0; j < cells.size(); ++j) {
            const std::string& cell = cells[j];
            const char* begin = cell.data();
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(begin, begin + cell.size(), v);
            if (ec != std::errc() || ptr != begin + cell.size())
                throw ParseError("cannot parse '" + cell + "' as a number", row,
                                 static_cast<int>(j + 1));
            values.push_back(v);
        }
        if (!rows.empty() && values.size() != rows.front().size())
            throw RaggedRows("matrix row " + std::to_string(row) + " has " +
                             std::to_string(values.size()) + " cells");
        rows.push_back(std::move(values));
    }
    if (rows.empty()) throw ParseError("empty matrix file", 1, 1);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.front().size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return m;
}

}  // namespace sig
