#pragma once

#include <Eigen/Core>

#include <cmath>
#include <initializer_list>

#include "simplex_infogeo/errors.hpp"

namespace sig {

/// Closure flag tolerance: |sum - 1| below this counts as closed.
inline constexpr double kClosureTol = 1e-12;

/// Tolerance for user-supplied tangent vectors (sum-zero check).
inline constexpr double kTangentTol = 1e-9;

/// A composition: a vector of strictly positive parts carrying only relative
/// information. The closed flag records whether the stored representative
/// sums to one; operations that need a probability vector close on demand.
class Composition {
public:
    explicit Composition(Eigen::VectorXd parts) : parts_(std::move(parts)) {
        if (parts_.size() < 2)
            throw DimensionTooSmall("composition needs at least 2 parts, got " +
                                    std::to_string(parts_.size()));
        for (Eigen::Index i = 0; i < parts_.size(); ++i) {
            if (!(parts_[i] > 0.0) || !std::isfinite(parts_[i]))
                throw NonPositivePart("part " + std::to_string(i + 1) + " is " +
                                      std::to_string(parts_[i]) + "; parts must be finite and > 0");
        }
        closed_ = std::abs(parts_.sum() - 1.0) <= kClosureTol;
    }

    Composition(std::initializer_list<double> parts)
        : Composition(Eigen::Map<const Eigen::VectorXd>(parts.begin(),
                                                        static_cast<Eigen::Index>(parts.size()))) {}

    int size() const { return static_cast<int>(parts_.size()); }
    double operator[](int i) const { return parts_[i]; }
    const Eigen::VectorXd& parts() const { return parts_; }
    bool is_closed() const { return closed_; }

    /// The unit-sum representative of this equivalence class.
    Composition closed() const {
        if (closed_) return *this;
        return Composition(parts_ / parts_.sum());
    }

private:
    Eigen::VectorXd parts_;
    bool closed_;
};

/// Closure: divide a positive vector by its sum.
inline Composition close(const Eigen::VectorXd& parts) { return Composition(parts).closed(); }

inline Composition close(const Composition& x) { return x.closed(); }

/// The neutral element n = (1/D, ..., 1/D).
inline Composition neutral(int dim) {
    if (dim < 2) throw DimensionTooSmall("neutral element needs dim >= 2");
    return Composition(Eigen::VectorXd::Constant(dim, 1.0 / dim));
}

inline void require_same_dim(const Composition& x, const Composition& y) {
    if (x.size() != y.size())
        throw DimensionMismatch("compositions have " + std::to_string(x.size()) + " and " +
                                std::to_string(y.size()) + " parts");
}

/// Perturbation x (+) y: componentwise product, closed.
inline Composition perturb(const Composition& x, const Composition& y) {
    require_same_dim(x, y);
    return close(Eigen::VectorXd(x.parts().cwiseProduct(y.parts())));
}

/// Powering alpha (.) x: componentwise power, closed.
inline Composition power(double alpha, const Composition& x) {
    if (!std::isfinite(alpha)) throw ParameterOutOfRange("power scalar must be finite");
    return close(Eigen::VectorXd(x.parts().array().pow(alpha).matrix()));
}

/// Inverse perturbation (-)x = (-1) (.) x.
inline Composition inverse(const Composition& x) { return power(-1.0, x); }

/// Perturbation difference x (-) y.
inline Composition perturb_diff(const Composition& x, const Composition& y) {
    return perturb(x, inverse(y));
}

/// Geometric mean of a positive vector (any length >= 1).
inline double geometric_mean(const Eigen::VectorXd& v) {
    if (v.size() == 0) throw EmptySelection("geometric mean of an empty selection");
    double mean_log = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0.0)) throw NonPositivePart("geometric mean needs positive entries");
        mean_log += std::log(v[i]);
    }
    return std::exp(mean_log / static_cast<double>(v.size()));
}

inline double geometric_mean(const Composition& x) { return geometric_mean(x.parts()); }

/// Element of the clr tangent space: a real vector with zero component sum.
class Tangent {
public:
    explicit Tangent(Eigen::VectorXd coords) : coords_(std::move(coords)) {
        if (std::abs(coords_.sum()) > kTangentTol)
            throw NotInTangentSpace("coordinate sum " + std::to_string(coords_.sum()) +
                                    " exceeds tolerance " + std::to_string(kTangentTol));
    }

    Tangent(std::initializer_list<double> coords)
        : Tangent(Eigen::Map<const Eigen::VectorXd>(coords.begin(),
                                                    static_cast<Eigen::Index>(coords.size()))) {}

    int size() const { return static_cast<int>(coords_.size()); }
    double operator[](int i) const { return coords_[i]; }
    const Eigen::VectorXd& coords() const { return coords_; }

private:
    Eigen::VectorXd coords_;
};

/// Centred log-ratio vector of a positive vector: log(v_i) minus the mean log.
/// Scale invariant; components sum to zero up to rounding.
inline Eigen::VectorXd clr_vector(const Eigen::VectorXd& v) {
    Eigen::VectorXd logs = v.array().log().matrix();
    return logs.array() - logs.mean();
}

/// clr transform: x -> (log(x_i / g(x)))_i, an isometry onto the sum-zero hyperplane.
inline Tangent clr(const Composition& x) { return Tangent(clr_vector(x.parts())); }

/// Inverse clr: closure of the componentwise exponential.
inline Composition clr_inv(const Tangent& v) {
    return close(Eigen::VectorXd(v.coords().array().exp().matrix()));
}

/// alr transform: theta^i = log(x_i / x_D), i = 1..D-1. The last part is the reference.
inline Eigen::VectorXd alr(const Composition& x) {
    const auto& p = x.parts();
    const int d = x.size() - 1;
    Eigen::VectorXd theta(d);
    const double log_ref = std::log(p[d]);
    for (int i = 0; i < d; ++i) theta[i] = std::log(p[i]) - log_ref;
    return theta;
}

/// Inverse alr: closure of (e^{theta^1}, ..., e^{theta^{D-1}}, 1), overflow-safe.
inline Composition alr_inv(const Eigen::VectorXd& theta) {
    const int dim = static_cast<int>(theta.size()) + 1;
    Eigen::VectorXd full(dim);
    full.head(dim - 1) = theta;
    full[dim - 1] = 0.0;
    // shift so that exp never overflows; closure cancels the shift
    full.array() -= full.maxCoeff();
    return close(Eigen::VectorXd(full.array().exp().matrix()));
}

/// Aitchison inner product <x,y>_A = sum_i clr_i(x) clr_i(y).
inline double aitchison_inner(const Composition& x, const Composition& y) {
    require_same_dim(x, y);
    return clr_vector(x.parts()).dot(clr_vector(y.parts()));
}

/// Squared Aitchison norm of a positive vector (0 for a single part).
inline double aitchison_norm2(const Eigen::VectorXd& v) {
    if (v.size() == 0) throw EmptySelection("norm of an empty selection");
    if (v.size() == 1) return 0.0;
    return clr_vector(v).squaredNorm();
}

inline double aitchison_norm2(const Composition& x) { return aitchison_norm2(x.parts()); }

inline double aitchison_norm(const Composition& x) { return std::sqrt(aitchison_norm2(x)); }

/// Squared Aitchison distance between two positive vectors of equal length.
inline double aitchison_dist2(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    if (x.size() != y.size())
        throw DimensionMismatch("vectors have " + std::to_string(x.size()) + " and " +
                                std::to_string(y.size()) + " parts");
    if (x.size() == 1) return 0.0;
    return (clr_vector(x) - clr_vector(y)).squaredNorm();
}

inline double aitchison_dist2(const Composition& x, const Composition& y) {
    return aitchison_dist2(x.parts(), y.parts());
}

inline double aitchison_distance(const Composition& x, const Composition& y) {
    return std::sqrt(aitchison_dist2(x, y));
}

}  // namespace sig
