#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "simplex_infogeo/composition.hpp"
#include "simplex_infogeo/divergence.hpp"
#include "simplex_infogeo/errors.hpp"

namespace sig {

/// A proper subset of part indices: both the subset and its complement are
/// nonempty. Indices are 0-based, stored sorted and unique.
class PartSubset {
public:
    PartSubset(int dim, std::vector<int> indices) : dim_(dim), indices_(std::move(indices)) {
        std::sort(indices_.begin(), indices_.end());
        indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
        if (indices_.empty() || static_cast<int>(indices_.size()) >= dim_)
            throw InvalidSubset("subset and complement must both be nonempty");
        if (indices_.front() < 0 || indices_.back() >= dim_)
            throw InvalidSubset("subset index out of range for dimension " + std::to_string(dim_));
    }

    int dim() const { return dim_; }
    int count() const { return static_cast<int>(indices_.size()); }
    const std::vector<int>& indices() const { return indices_; }

    std::vector<int> complement() const {
        std::vector<int> c;
        c.reserve(dim_ - count());
        std::size_t k = 0;
        for (int i = 0; i < dim_; ++i) {
            if (k < indices_.size() && indices_[k] == i) {
                ++k;
                continue;
            }
            c.push_back(i);
        }
        return c;
    }

private:
    int dim_;
    std::vector<int> indices_;
};

namespace detail {

inline Eigen::VectorXd gather(const Eigen::VectorXd& v, const std::vector<int>& idx) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[idx[i]];
    return out;
}

/// Complement parts in original order with one aggregate appended last.
inline Eigen::VectorXd with_aggregate(const Eigen::VectorXd& v, const PartSubset& a,
                                      double aggregate) {
    const std::vector<int> comp = a.complement();
    Eigen::VectorXd out(static_cast<Eigen::Index>(comp.size()) + 1);
    for (std::size_t i = 0; i < comp.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[comp[i]];
    out[out.size() - 1] = aggregate;
    return out;
}

/// Shannon entropy of a raw probability vector (0 for a single cell).
inline double entropy_raw(const Eigen::VectorXd& p) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) acc -= p[i] * std::log(p[i]);
    return acc;
}

inline void check_subset(const Composition& x, const PartSubset& a) {
    if (a.dim() != x.size())
        throw InvalidSubset("subset is for dimension " + std::to_string(a.dim()) +
                            ", composition has " + std::to_string(x.size()) + " parts");
}

}  // namespace detail

/// Closed subcomposition of the selected parts. Needs at least two parts
/// selected; a singleton carries no relative information.
inline Composition subcomposition(const Composition& x, const PartSubset& a) {
    detail::check_subset(x, a);
    if (a.count() < 2)
        throw InvalidSubset("subcomposition needs at least 2 selected parts");
    return close(detail::gather(x.parts(), a.indices()));
}

/// Mass of the selected parts of the closed representative.
inline double subset_sum(const Composition& x, const PartSubset& a) {
    detail::check_subset(x, a);
    return detail::gather(x.closed().parts(), a.indices()).sum();
}

/// Amalgamation: coarse-grain the selected parts into their sum. Complement
/// parts keep their original order; the aggregate is appended last. Sums are
/// preserved, so a closed input stays closed without renormalization.
inline Composition amalgamate(const Composition& x, const PartSubset& a) {
    detail::check_subset(x, a);
    const Eigen::VectorXd p = x.closed().parts();
    const double s = detail::gather(p, a.indices()).sum();
    return Composition(detail::with_aggregate(p, a, s));
}

/// Shannon entropy H(x) = -sum_i x_i log x_i of the closed representative.
inline double shannon_entropy(const Composition& x) {
    return detail::entropy_raw(x.closed().parts());
}

/// One named identity split into summands; residual = lhs - sum(terms).
struct DecompositionReport {
    std::string identity;
    double lhs;
    std::vector<std::pair<std::string, double>> terms;
    double residual;

    static DecompositionReport make(std::string identity, double lhs,
                                    std::vector<std::pair<std::string, double>> terms) {
        double sum = 0.0;
        for (const auto& t : terms) sum += t.second;
        return {std::move(identity), lhs, std::move(terms), lhs - sum};
    }
};

enum class EntropyMode { subcomp, amalgam };

/// Shannon-entropy decompositions over a part subset A with mass s:
///   subcomp:  H(x) = (1-s) H(Cx_{D\A}) + s H(Cx_A) + H(s, 1-s)
///   amalgam:  H(x) = H((x_{D\A}, s)) + s H(Cx_A)
/// The amalgam form's second term is the coarse-graining loss, >= 0.
inline DecompositionReport entropy_decomposition(const Composition& x, const PartSubset& a,
                                                 EntropyMode mode) {
    detail::check_subset(x, a);
    const Eigen::VectorXd p = x.closed().parts();
    const Eigen::VectorXd sub = detail::gather(p, a.indices());
    const Eigen::VectorXd comp = detail::gather(p, a.complement());
    const double s = sub.sum();
    const double lhs = detail::entropy_raw(p);
    const double h_sub_closed = detail::entropy_raw(Eigen::VectorXd(sub / s));

    if (mode == EntropyMode::amalgam) {
        const double h_amalgam = detail::entropy_raw(detail::with_aggregate(p, a, s));
        return DecompositionReport::make(
            "entropy-amalgam", lhs,
            {{"amalgamated_entropy", h_amalgam}, {"coarse_graining_loss", s * h_sub_closed}});
    }
    const double s_comp = comp.sum();
    const double h_comp_closed = detail::entropy_raw(Eigen::VectorXd(comp / s_comp));
    const double h_binary = -(s * std::log(s) + (1.0 - s) * std::log(1.0 - s));
    return DecompositionReport::make("entropy-subcomp", lhs,
                                     {{"complement_weighted", (1.0 - s) * h_comp_closed},
                                      {"subset_weighted", s * h_sub_closed},
                                      {"binary_split", h_binary}});
}

/// Interaction coefficient of the geometric-mean aggregation identity,
/// a(D-a)/D - (D-a)/(D-a+1) = (a-1)(D-a)^2 / (D(D-a+1)) >= 0.
inline double geomean_interaction_coeff(int dim, int a) {
    const double da = static_cast<double>(dim - a);
    return static_cast<double>(a) * da / dim - da / (da + 1.0);
}

enum class AggregationMode { subcomp, amalgam, geomean };

inline const char* to_string(AggregationMode m) {
    switch (m) {
        case AggregationMode::subcomp: return "subcomp";
        case AggregationMode::amalgam: return "amalgam";
        case AggregationMode::geomean: return "geomean";
    }
    return "?";
}

/// Squared-Aitchison-norm decompositions over a part subset A (size a,
/// complement size D-a, L = log(g(x_{D\A}) / g(x_A))):
///   subcomp:  ||x||^2 = ||x_{D\A}||^2 + ||x_A||^2 + (a(D-a)/D) L^2
///   amalgam:  ||x||^2 = ||(x_{D\A}, s)||^2 + ||x_A||^2 + (a(D-a)/D) L^2
///                        - ((D-a)/(D-a+1)) log^2(g(x_{D\A})/s)
///   geomean:  ||x||^2 = ||(x_{D\A}, g(x_A))||^2 + ||x_A||^2 + coeff L^2
/// All are identities; the amalgam correction enters as a negative term.
inline DecompositionReport norm_decomposition(const Composition& x, const PartSubset& a,
                                              AggregationMode mode) {
    detail::check_subset(x, a);
    const Eigen::VectorXd p = x.closed().parts();
    const Eigen::VectorXd sub = detail::gather(p, a.indices());
    const Eigen::VectorXd comp = detail::gather(p, a.complement());
    const int dim = a.dim();
    const int na = a.count();
    const double g_sub = geometric_mean(sub);
    const double g_comp = geometric_mean(comp);
    const double log_ratio = std::log(g_comp / g_sub);
    const double lhs = aitchison_norm2(p);
    const double norm_sub = aitchison_norm2(sub);
    const double cross = static_cast<double>(na) * (dim - na) / dim * log_ratio * log_ratio;

    switch (mode) {
        case AggregationMode::subcomp:
            return DecompositionReport::make("norm-subcomp", lhs,
                                             {{"complement_norm", aitchison_norm2(comp)},
                                              {"subset_norm", norm_sub},
                                              {"interaction", cross}});
        case AggregationMode::amalgam: {
            const double s = sub.sum();
            const double log_gs = std::log(g_comp / s);
            const double correction =
                -static_cast<double>(dim - na) / (dim - na + 1) * log_gs * log_gs;
            return DecompositionReport::make(
                "norm-amalgam", lhs,
                {{"amalgamated_norm", aitchison_norm2(detail::with_aggregate(p, a, s))},
                 {"subset_norm", norm_sub},
                 {"interaction", cross},
                 {"amalgam_correction", correction}});
        }
        case AggregationMode::geomean: {
            const double coeff = geomean_interaction_coeff(dim, na);
            return DecompositionReport::make(
                "norm-geomean", lhs,
                {{"aggregated_norm", aitchison_norm2(detail::with_aggregate(p, a, g_sub))},
                 {"subset_norm", norm_sub},
                 {"interaction", coeff * log_ratio * log_ratio}});
        }
    }
    throw ParameterOutOfRange("unknown aggregation mode");
}

/// Aitchison-distance decompositions over a part subset, each side aggregated
/// from its own parts. With L_x = log(g(x_{D\A})/g(x_A)), M_x = log(g(x_{D\A})/s(x_A)):
///   amalgam:  d^2(x,y) = d^2(amalg x, amalg y) + d^2(x_A, y_A)
///                         + (a(D-a)/D)(L_x - L_y)^2 - ((D-a)/(D-a+1))(M_x - M_y)^2
///   geomean:  d^2(x,y) = d^2((x_{D\A}, g(x_A)), (y_{D\A}, g(y_A))) + d^2(x_A, y_A)
///                         + coeff (L_x - L_y)^2,  coeff >= 0
/// The geomean form drops to an inequality (monotonicity) when the
/// nonnegative interaction term is omitted.
inline DecompositionReport distance_decomposition(const Composition& x, const Composition& y,
                                                  const PartSubset& a, AggregationMode mode) {
    detail::check_subset(x, a);
    detail::check_subset(y, a);
    require_same_dim(x, y);
    if (mode == AggregationMode::subcomp)
        throw ParameterOutOfRange("distance decomposition supports amalgam and geomean modes");

    const Eigen::VectorXd px = x.closed().parts();
    const Eigen::VectorXd py = y.closed().parts();
    const Eigen::VectorXd sub_x = detail::gather(px, a.indices());
    const Eigen::VectorXd sub_y = detail::gather(py, a.indices());
    const Eigen::VectorXd comp_x = detail::gather(px, a.complement());
    const Eigen::VectorXd comp_y = detail::gather(py, a.complement());
    const int dim = a.dim();
    const int na = a.count();

    const double lhs = aitchison_dist2(px, py);
    const double sub_dist = aitchison_dist2(sub_x, sub_y);
    const double dl = std::log(geometric_mean(comp_x) / geometric_mean(sub_x)) -
                      std::log(geometric_mean(comp_y) / geometric_mean(sub_y));
    const double cross = static_cast<double>(na) * (dim - na) / dim * dl * dl;

    if (mode == AggregationMode::amalgam) {
        const double sx = sub_x.sum();
        const double sy = sub_y.sum();
        const double agg_dist = aitchison_dist2(detail::with_aggregate(px, a, sx),
                                                detail::with_aggregate(py, a, sy));
        const double dm = std::log(geometric_mean(comp_x) / sx) -
                          std::log(geometric_mean(comp_y) / sy);
        const double correction = -static_cast<double>(dim - na) / (dim - na + 1) * dm * dm;
        return DecompositionReport::make("distance-amalgam", lhs,
                                         {{"amalgamated_distance", agg_dist},
                                          {"subset_distance", sub_dist},
                                          {"interaction", cross},
                                          {"amalgam_correction", correction}});
    }
    const double agg_dist =
        aitchison_dist2(detail::with_aggregate(px, a, geometric_mean(sub_x)),
                        detail::with_aggregate(py, a, geometric_mean(sub_y)));
    const double coeff = geomean_interaction_coeff(dim, na);
    return DecompositionReport::make("distance-geomean", lhs,
                                     {{"aggregated_distance", agg_dist},
                                      {"subset_distance", sub_dist},
                                      {"interaction", coeff * dl * dl}});
}

/// Information-monotonicity audit of one pair over one subset: Aitchison
/// distance and relative entropy both may only shrink under amalgamation.
struct MonotonicityAudit {
    double aitchison_before;
    double aitchison_after;
    double aitchison_margin;  // before - after, >= 0 up to rounding
    double kl_before;
    double kl_after;
    double kl_margin;  // before - after, >= 0 up to rounding
};

inline MonotonicityAudit monotonicity_audit(const Composition& x, const Composition& y,
                                            const PartSubset& a) {
    detail::check_subset(x, a);
    detail::check_subset(y, a);
    require_same_dim(x, y);
    const Composition ax = amalgamate(x, a);
    const Composition ay = amalgamate(y, a);
    const double d_before = aitchison_dist2(x, y);
    const double d_after = aitchison_dist2(ax, ay);
    const double kl_before = kl(x, y).value;
    const double kl_after = kl(ax, ay).value;
    return {d_before, d_after, d_before - d_after, kl_before, kl_after, kl_before - kl_after};
}

}  // namespace sig
