#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "simplex_infogeo/composition.hpp"
#include "simplex_infogeo/errors.hpp"

namespace sig {

/// Acceptance tolerance for the two contrast-matrix conditions.
inline constexpr double kContrastTol = 1e-10;

enum class ContrastKind { helmert, pivot, user_sbp };

inline const char* to_string(ContrastKind k) {
    switch (k) {
        case ContrastKind::helmert: return "helmert";
        case ContrastKind::pivot: return "pivot";
        case ContrastKind::user_sbp: return "user-sbp";
    }
    return "?";
}

/// Deviations of a candidate matrix from the two conditions
///   V^T V = I_{D-1}          (orthonormal columns)
///   V V^T = I_D - (1/D) 11^T (columns span the sum-zero hyperplane)
struct ContrastValidation {
    double orthonormality_deviation;  // max |(V^T V - I)_ij|
    double centering_deviation;       // max |(V V^T - I + (1/D) 11^T)_ij|
    bool pass;                        // both deviations <= kContrastTol
};

inline ContrastValidation validate_contrast(const Eigen::MatrixXd& v) {
    const Eigen::Index dim = v.rows();
    const Eigen::Index cols = v.cols();
    if (cols != dim - 1)
        throw DimensionMismatch("contrast matrix must be D x (D-1), got " + std::to_string(dim) +
                                " x " + std::to_string(cols));
    const Eigen::MatrixXd gram = v.transpose() * v;
    const double dev1 =
        (gram - Eigen::MatrixXd::Identity(cols, cols)).cwiseAbs().maxCoeff();
    Eigen::MatrixXd centering = Eigen::MatrixXd::Identity(dim, dim);
    centering.array() -= 1.0 / static_cast<double>(dim);
    const double dev2 = (v * v.transpose() - centering).cwiseAbs().maxCoeff();
    return {dev1, dev2, dev1 <= kContrastTol && dev2 <= kContrastTol};
}

/// Orthonormal sum-zero-column basis matrix for ilr coordinates.
class ContrastMatrix {
public:
    ContrastMatrix(Eigen::MatrixXd entries, ContrastKind kind)
        : entries_(std::move(entries)), kind_(kind) {
        auto report = validate_contrast(entries_);
        if (!report.pass)
            throw InvalidPartition(std::string("matrix violates the contrast conditions (") +
                                   "orthonormality dev " +
                                   std::to_string(report.orthonormality_deviation) +
                                   ", centering dev " + std::to_string(report.centering_deviation) +
                                   ")");
    }

    int dim() const { return static_cast<int>(entries_.rows()); }
    const Eigen::MatrixXd& entries() const { return entries_; }
    ContrastKind kind() const { return kind_; }

private:
    Eigen::MatrixXd entries_;
    ContrastKind kind_;
};

namespace detail {

inline Eigen::MatrixXd helmert_matrix(int dim) {
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(dim, dim - 1);
    for (int j = 1; j < dim; ++j) {
        const double norm = std::sqrt(static_cast<double>(j) * (j + 1));
        for (int i = 0; i < j; ++i) v(i, j - 1) = 1.0 / norm;
        v(j, j - 1) = -static_cast<double>(j) / norm;
    }
    return v;
}

inline Eigen::MatrixXd pivot_matrix(int dim) {
    // column j contrasts part j against the geometric mean of parts j+1..D
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(dim, dim - 1);
    for (int j = 0; j < dim - 1; ++j) {
        const double r = static_cast<double>(dim - 1 - j);
        const double scale = std::sqrt(r / (r + 1.0));
        v(j, j) = scale;
        for (int i = j + 1; i < dim; ++i) v(i, j) = -scale / r;
    }
    return v;
}

/// Balance column for one partition step with +group of size r and -group of size s.
inline void fill_balance_column(Eigen::MatrixXd& v, int col, const std::vector<int>& plus,
                                const std::vector<int>& minus) {
    const double r = static_cast<double>(plus.size());
    const double s = static_cast<double>(minus.size());
    for (int i : plus) v(i, col) = std::sqrt(s / (r * (r + s)));
    for (int i : minus) v(i, col) = -std::sqrt(r / (s * (r + s)));
}

inline Eigen::MatrixXd sbp_matrix(const Eigen::MatrixXi& sbp) {
    const int dim = static_cast<int>(sbp.cols());
    if (sbp.rows() != dim - 1)
        throw InvalidPartition("sign matrix must be (D-1) x D, got " +
                               std::to_string(sbp.rows()) + " x " + std::to_string(sbp.cols()));
    // Each row must split one currently unresolved group into two nonempty halves.
    std::vector<std::set<int>> groups;
    std::set<int> all;
    for (int i = 0; i < dim; ++i) all.insert(i);
    groups.push_back(all);

    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(dim, dim - 1);
    for (int row = 0; row < dim - 1; ++row) {
        std::set<int> support;
        std::vector<int> plus, minus;
        for (int i = 0; i < dim; ++i) {
            const int s = sbp(row, i);
            if (s == 0) continue;
            if (s == 1) plus.push_back(i);
            else if (s == -1) minus.push_back(i);
            else
                throw InvalidPartition("sign matrix entries must be -1, 0 or 1");
            support.insert(i);
        }
        if (plus.empty() || minus.empty())
            throw InvalidPartition("row " + std::to_string(row + 1) +
                                   " does not split into two nonempty groups");
        auto it = std::find(groups.begin(), groups.end(), support);
        if (it == groups.end())
            throw InvalidPartition("row " + std::to_string(row + 1) +
                                   " does not split an unresolved group (not sequential)");
        groups.erase(it);
        groups.emplace_back(plus.begin(), plus.end());
        groups.emplace_back(minus.begin(), minus.end());
        fill_balance_column(v, row, plus, minus);
    }
    return v;
}

}  // namespace detail

/// Build a contrast matrix. Helmert is the deterministic default; pivot gives
/// pivot coordinates; user_sbp derives balance columns from a (D-1) x D sign
/// matrix describing a sequential binary partition.
inline ContrastMatrix build_contrast(int dim, ContrastKind kind,
                                     const Eigen::MatrixXi& sbp = Eigen::MatrixXi()) {
    if (dim < 2) throw DimensionTooSmall("contrast matrix needs dim >= 2");
    switch (kind) {
        case ContrastKind::helmert: return {detail::helmert_matrix(dim), kind};
        case ContrastKind::pivot: return {detail::pivot_matrix(dim), kind};
        case ContrastKind::user_sbp: return {detail::sbp_matrix(sbp), kind};
    }
    throw ParameterOutOfRange("unknown contrast kind");
}

/// ilr coordinates together with the basis they were computed in.
struct IlrCoords {
    Eigen::VectorXd z;
    ContrastMatrix contrast;
};

/// ilr transform z = V^T log(x): Euclidean coordinates of x in the basis V.
inline IlrCoords ilr(const Composition& x, const ContrastMatrix& v) {
    if (v.dim() != x.size())
        throw DimensionMismatch("contrast is for dim " + std::to_string(v.dim()) +
                                ", composition has " + std::to_string(x.size()));
    Eigen::VectorXd logs = x.parts().array().log().matrix();
    return {v.entries().transpose() * logs, v};
}

/// Inverse ilr: closure of exp(V z).
inline Composition ilr_inv(const Eigen::VectorXd& z, const ContrastMatrix& v) {
    if (z.size() != v.dim() - 1)
        throw DimensionMismatch("coordinate length " + std::to_string(z.size()) +
                                " does not match contrast dim " + std::to_string(v.dim()));
    Eigen::VectorXd w = v.entries() * z;
    w.array() -= w.maxCoeff();
    return close(Eigen::VectorXd(w.array().exp().matrix()));
}

inline Composition ilr_inv(const IlrCoords& c) { return ilr_inv(c.z, c.contrast); }

}  // namespace sig
