#pragma once

#include <Eigen/Core>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "simplex_infogeo/composition.hpp"
#include "simplex_infogeo/divergence.hpp"
#include "simplex_infogeo/duality.hpp"
#include "simplex_infogeo/errors.hpp"

namespace sig {

/// Exponential map exp_x(v) = x (+) e^v: additive reformulation of the affine
/// structure, anchored at x.
inline Composition exp_map(const Composition& x, const Tangent& v) {
    if (v.size() != x.size())
        throw DimensionMismatch("tangent has " + std::to_string(v.size()) + " coordinates for " +
                                std::to_string(x.size()) + " parts");
    Eigen::VectorXd w = x.parts().array().log() + v.coords().array();
    w.array() -= w.maxCoeff();
    return close(Eigen::VectorXd(w.array().exp().matrix()));
}

/// Inverse of the exponential map: the difference vector clr(y) - clr(x).
/// At the simplex centre, log_map(n, x) = clr(x).
inline Tangent log_map(const Composition& x, const Composition& y) {
    require_same_dim(x, y);
    return Tangent(clr_vector(y.parts()) - clr_vector(x.parts()));
}

enum class GeodesicKind { e, m };

/// A geodesic segment between two compositions, parametrized on [0, 1].
/// The e-kind is a straight line in theta coordinates (geometric mixture);
/// the m-kind is a straight line in eta coordinates (probability mixture).
class Geodesic {
public:
    Geodesic(GeodesicKind kind, Composition from, Composition to)
        : kind_(kind), from_(from.closed()), to_(to.closed()) {
        require_same_dim(from_, to_);
    }

    GeodesicKind kind() const { return kind_; }
    const Composition& from() const { return from_; }
    const Composition& to() const { return to_; }

    Composition operator()(double t) const {
        if (!(t >= 0.0 && t <= 1.0))
            throw ParameterOutOfRange("geodesic parameter " + std::to_string(t) +
                                      " outside [0, 1]");
        if (kind_ == GeodesicKind::e) {
            // linear in theta: components proportional to from_i^{1-t} to_i^t
            Eigen::VectorXd w = (1.0 - t) * from_.parts().array().log().matrix() +
                                t * to_.parts().array().log().matrix();
            w.array() -= w.maxCoeff();
            return close(Eigen::VectorXd(w.array().exp().matrix()));
        }
        return Composition((1.0 - t) * from_.parts() + t * to_.parts());
    }

private:
    GeodesicKind kind_;
    Composition from_;
    Composition to_;
};

inline Composition geodesic_eval(const Geodesic& g, double t) { return g(t); }

/// A tangent vector anchored at a base composition, represented in theta
/// coordinates (length D-1).
struct TangentAtPoint {
    Composition base;
    Eigen::VectorXd direction;
};

/// Convert a clr-space tangent to the theta representation at the same point.
/// The alr/clr Jacobian is theta^i = clr_i - clr_D, so u_i = v_i - v_D.
inline TangentAtPoint theta_tangent(const Composition& base, const Tangent& v) {
    if (v.size() != base.size())
        throw DimensionMismatch("tangent dimension does not match base");
    const Eigen::VectorXd& c = v.coords();
    Eigen::VectorXd u = (c.head(c.size() - 1).array() - c[c.size() - 1]).matrix();
    return {base.closed(), std::move(u)};
}

/// Inverse conversion: centre the padded theta direction back into clr space.
inline Tangent clr_tangent(const TangentAtPoint& u) {
    Eigen::VectorXd full(u.direction.size() + 1);
    full.head(u.direction.size()) = u.direction;
    full[u.direction.size()] = 0.0;
    full.array() -= full.mean();
    return Tangent(full);
}

/// Fisher inner product of two tangents at a shared base point:
/// u^T g(theta(base)) w with the theta-coordinate Fisher matrix.
inline double fisher_inner(const TangentAtPoint& u, const TangentAtPoint& w) {
    if (u.base.size() != w.base.size() ||
        (u.base.closed().parts() - w.base.closed().parts()).cwiseAbs().maxCoeff() > 1e-12)
        throw BasePointMismatch("tangents are anchored at different compositions");
    if (u.direction.size() != w.direction.size())
        throw DimensionMismatch("tangent directions differ in length");
    const FisherMatrix g = fisher_theta(theta_of(u.base.closed()));
    return u.direction.dot(g.g * w.direction);
}

struct MProjectionResult {
    Composition point;  // foot of the projection, z = G(t)
    double t;
    bool boundary;  // true when the minimizer sits on an endpoint
};

namespace detail {

/// 1-D objective of the m-projection: t -> D_phi(x || G(t)).
inline double m_projection_objective(const Composition& x, const Geodesic& g, double t) {
    return kl(x, g(t)).value;
}

}  // namespace detail

/// m-projection of x onto an e-geodesic: the divergence-minimizing point
/// z = G(t*). Golden-section search (40 iterations) followed by three Newton
/// refinement steps with central-difference derivatives. At an interior t*
/// the m-geodesic x -> z is Fisher-orthogonal to G.
inline MProjectionResult m_projection(const Composition& x, const Geodesic& g) {
    if (g.kind() != GeodesicKind::e)
        throw ParameterOutOfRange("m_projection requires an e-geodesic");
    require_same_dim(x, g.from());

    const auto f = [&](double t) { return detail::m_projection_objective(x, g, t); };

    // golden-section bracket shrink on [0, 1]
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0, hi = 1.0;
    double t1 = hi - inv_phi * (hi - lo);
    double t2 = lo + inv_phi * (hi - lo);
    double f1 = f(t1), f2 = f(t2);
    for (int it = 0; it < 40; ++it) {
        if (f1 <= f2) {
            hi = t2;
            t2 = t1;
            f2 = f1;
            t1 = hi - inv_phi * (hi - lo);
            f1 = f(t1);
        } else {
            lo = t1;
            t1 = t2;
            f1 = f2;
            t2 = lo + inv_phi * (hi - lo);
            f2 = f(t2);
        }
    }
    double t = 0.5 * (lo + hi);

    // wider than the Newton step below, so refinement never probes outside [0, 1]
    const double boundary_band = 1e-4;
    if (t < boundary_band || t > 1.0 - boundary_band) {
        const double t_star = t < 0.5 ? 0.0 : 1.0;
        return {g(t_star), t_star, true};
    }

    // Newton refinement on the smooth, convex 1-D objective
    const double h = 1e-5;
    for (int it = 0; it < 3; ++it) {
        const double fp = f(t + h);
        const double fm = f(t - h);
        const double fc = f(t);
        const double d1 = (fp - fm) / (2.0 * h);
        const double d2 = (fp - 2.0 * fc + fm) / (h * h);
        if (!(d2 > 0.0)) break;
        const double step = d1 / d2;
        t = std::clamp(t - step, boundary_band, 1.0 - boundary_band);
    }
    return {g(t), t, false};
}

/// Residual report for the generalized Pythagorean relation at a candidate
/// foot point z between x and y on an e-geodesic:
///   D_phi(x||y) = D_phi(x||z) + D_phi(z||y)
/// holds exactly when the m-geodesic z -> x and the e-geodesic z -> y are
/// Fisher-orthogonal at z; both residuals are reported.
struct PythagorasReport {
    double divergence_total;      // D_phi(x||y)
    double divergence_to_foot;    // D_phi(x||z)
    double divergence_from_foot;  // D_phi(z||y)
    double additivity_residual;   // to_foot + from_foot - total
    double orthogonality_residual;  // <m-tangent z->x, e-tangent z->y>_g at z
};

inline PythagorasReport pythagoras_check(const Composition& x, const Composition& z,
                                         const Composition& y) {
    require_same_dim(x, z);
    require_same_dim(z, y);
    const double total = kl(x, y).value;
    const double leg1 = kl(x, z).value;
    const double leg2 = kl(z, y).value;

    const Composition zc = z.closed();
    const Eigen::VectorXd eta_x = eta_of(x).vector();
    const Eigen::VectorXd eta_z = eta_of(zc).vector();
    // m-geodesic tangent at z toward x, converted from eta to theta coordinates
    const FisherMatrix g = fisher_theta(theta_of(zc));
    const Eigen::VectorXd m_dir_theta = g.g.ldlt().solve(eta_x - eta_z);
    const Eigen::VectorXd e_dir_theta = theta_of(y.closed()).vector() - theta_of(zc).vector();
    const double ortho = fisher_inner({zc, m_dir_theta}, {zc, e_dir_theta});

    return {total, leg1, leg2, leg1 + leg2 - total, ortho};
}

/// Perturbation-independence of a set of compositions, tested as the rank of
/// the matrix of clr images: independent iff rank equals the set size.
inline bool perturbation_independent(const std::vector<Composition>& xs, double tol = 1e-10) {
    if (xs.empty()) return true;
    const int dim = xs[0].size();
    Eigen::MatrixXd m(static_cast<Eigen::Index>(xs.size()), dim);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i].size() != dim) throw DimensionMismatch("compositions differ in dimension");
        m.row(static_cast<Eigen::Index>(i)) = clr_vector(xs[i].parts()).transpose();
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const Eigen::VectorXd& sv = svd.singularValues();
    if (sv.size() == 0) return false;
    // absolute floor as well: the all-zero clr matrix (the neutral element)
    // has singular values at rounding scale, not at scale sv[0]
    const double threshold = tol * std::max(sv[0], 1.0);
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > threshold) ++rank;
    return rank == static_cast<int>(xs.size());
}

}  // namespace sig
