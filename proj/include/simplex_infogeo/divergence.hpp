#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>

#include "simplex_infogeo/composition.hpp"
#include "simplex_infogeo/contrast.hpp"
#include "simplex_infogeo/duality.hpp"
#include "simplex_infogeo/errors.hpp"

namespace sig {

/// Guard band around the alpha-divergence poles at alpha = +-1.
inline constexpr double kAlphaGuard = 1e-6;

/// Guard band around beta = 0 for the Box-Cox distance family.
inline constexpr double kBoxCoxGuard = 1e-6;

/// Step for the central-difference gradient fallback of ConvexPotential.
inline constexpr double kPotentialGradStep = 1e-6;

enum class DivergenceKind {
    bregman,
    kl,
    kl_reverse,
    alpha,
    f_divergence,
    aitchison,
};

struct DivergenceResult {
    double value;
    DivergenceKind kind;
    const char* direction;  // "x||y", "y||x" or "symmetric"
};

/// A convex potential over one of the coordinate charts of the simplex.
/// The gradient is optional; when absent a central-difference fallback is
/// used. Reentrancy of the callables is the caller's contract.
struct ConvexPotential {
    CoordinateSystem coords;
    std::function<double(const Eigen::VectorXd&)> value;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;  // may be empty
};

namespace detail {

inline Eigen::VectorXd potential_coords(const ConvexPotential& u, const Composition& x) {
    switch (u.coords) {
        case CoordinateSystem::theta: return alr(x.closed());
        case CoordinateSystem::eta: {
            const Composition c = x.closed();
            return c.parts().head(c.size() - 1);
        }
        case CoordinateSystem::ilr:
            return ilr(x.closed(), build_contrast(x.size(), ContrastKind::helmert)).z;
    }
    throw ParameterOutOfRange("unknown coordinate system");
}

inline double potential_value(const ConvexPotential& u, const Eigen::VectorXd& c) {
    const double v = u.value(c);
    if (!std::isfinite(v))
        throw CoordinateDomainError("potential evaluated to a non-finite value");
    return v;
}

inline Eigen::VectorXd potential_gradient(const ConvexPotential& u, const Eigen::VectorXd& c) {
    if (u.gradient) {
        Eigen::VectorXd g = u.gradient(c);
        if (!g.allFinite()) throw CoordinateDomainError("potential gradient is non-finite");
        return g;
    }
    Eigen::VectorXd g(c.size());
    Eigen::VectorXd probe = c;
    for (Eigen::Index i = 0; i < c.size(); ++i) {
        probe[i] = c[i] + kPotentialGradStep;
        const double up = potential_value(u, probe);
        probe[i] = c[i] - kPotentialGradStep;
        const double dn = potential_value(u, probe);
        probe[i] = c[i];
        g[i] = (up - dn) / (2.0 * kPotentialGradStep);
    }
    return g;
}

}  // namespace detail

/// Bregman divergence D_U(x||y) = U(c_x) - U(c_y) - grad U(c_y) . (c_x - c_y),
/// evaluated in the potential's own coordinate chart.
inline DivergenceResult bregman(const ConvexPotential& u, const Composition& x,
                                const Composition& y) {
    require_same_dim(x, y);
    const Eigen::VectorXd cx = detail::potential_coords(u, x);
    const Eigen::VectorXd cy = detail::potential_coords(u, y);
    const double value = detail::potential_value(u, cx) - detail::potential_value(u, cy) -
                         detail::potential_gradient(u, cy).dot(cx - cy);
    return {value, DivergenceKind::bregman, "x||y"};
}

/// Relative entropy D_phi(x||y) = sum_i x_i log(x_i / y_i).
inline DivergenceResult kl(const Composition& x, const Composition& y) {
    require_same_dim(x, y);
    const Eigen::VectorXd p = x.closed().parts();
    const Eigen::VectorXd q = y.closed().parts();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) acc += p[i] * std::log(p[i] / q[i]);
    return {acc, DivergenceKind::kl, "x||y"};
}

/// Dual relative entropy D_psi(x||y) = sum_i y_i log(y_i / x_i) = D_phi(y||x).
inline DivergenceResult kl_reverse(const Composition& x, const Composition& y) {
    DivergenceResult r = kl(y, x);
    return {r.value, DivergenceKind::kl_reverse, "y||x"};
}

/// Bhattacharyya coefficient sum_i sqrt(x_i y_i), in (0, 1].
inline double bhattacharyya(const Composition& x, const Composition& y) {
    require_same_dim(x, y);
    const Eigen::VectorXd p = x.closed().parts();
    const Eigen::VectorXd q = y.closed().parts();
    return p.cwiseProduct(q).cwiseSqrt().sum();
}

/// Squared Hellinger distance sum_i (sqrt(x_i) - sqrt(y_i))^2 = 2 (1 - BC).
inline double hellinger_sq(const Composition& x, const Composition& y) {
    require_same_dim(x, y);
    const Eigen::VectorXd p = x.closed().parts();
    const Eigen::VectorXd q = y.closed().parts();
    return (p.cwiseSqrt() - q.cwiseSqrt()).squaredNorm();
}

inline double hellinger(const Composition& x, const Composition& y) {
    return std::sqrt(hellinger_sq(x, y));
}

/// Riemannian distance of the Fisher metric: d_F = 2 arccos(BC).
/// The arccos argument is clamped; BC can exceed one by ~1e-16 at x = y.
inline double fisher_distance(const Composition& x, const Composition& y) {
    const double bc = std::clamp(bhattacharyya(x, y), -1.0, 1.0);
    return 2.0 * std::acos(bc);
}

/// alpha-divergence D_alpha(x||y) = 4/(1-alpha^2) (1 - sum_i y_i^{(1+alpha)/2} x_i^{(1-alpha)/2}).
/// Within kAlphaGuard of the poles the exact relative-entropy limit is
/// returned: alpha -> +1 gives D_psi (= kl_reverse), alpha -> -1 gives D_phi.
inline DivergenceResult alpha_divergence(double alpha, const Composition& x,
                                         const Composition& y) {
    require_same_dim(x, y);
    if (std::abs(alpha - 1.0) <= kAlphaGuard) {
        DivergenceResult r = kl_reverse(x, y);
        return {r.value, DivergenceKind::alpha, "y||x"};
    }
    if (std::abs(alpha + 1.0) <= kAlphaGuard) {
        DivergenceResult r = kl(x, y);
        return {r.value, DivergenceKind::alpha, "x||y"};
    }
    const Eigen::VectorXd p = x.closed().parts();
    const Eigen::VectorXd q = y.closed().parts();
    const double ey = 0.5 * (1.0 + alpha);
    const double ex = 0.5 * (1.0 - alpha);
    double s = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) s += std::pow(q[i], ey) * std::pow(p[i], ex);
    const double value = 4.0 / (1.0 - alpha * alpha) * (1.0 - s);
    return {value, DivergenceKind::alpha, alpha == 0.0 ? "symmetric" : "x||y"};
}

/// Box-Cox distance family
///   d_beta^2 = (1/beta^2) sum_i w_i (C(x^beta)_i - C(y^beta)_i)^2.
/// Within kBoxCoxGuard of beta = 0 the analytic limit
///   sum_i (w_i / D^2) (clr_i(x) - clr_i(y))^2
/// is used; with w_i = D^2 that limit is the squared Aitchison distance.
inline double boxcox_distance_sq(double beta, const Eigen::VectorXd& weights,
                                 const Composition& x, const Composition& y) {
    require_same_dim(x, y);
    if (weights.size() != x.size())
        throw DimensionMismatch("weight vector length " + std::to_string(weights.size()) +
                                " does not match dimension " + std::to_string(x.size()));
    for (Eigen::Index i = 0; i < weights.size(); ++i)
        if (weights[i] < 0.0) throw NegativeWeight("weight " + std::to_string(i + 1) + " < 0");

    const int dim = x.size();
    if (std::abs(beta) <= kBoxCoxGuard) {
        const Eigen::VectorXd diff = clr_vector(x.parts()) - clr_vector(y.parts());
        return (weights.array() * diff.array().square()).sum() / (static_cast<double>(dim) * dim);
    }
    const Eigen::VectorXd px = x.closed().parts().array().pow(beta).matrix();
    const Eigen::VectorXd py = y.closed().parts().array().pow(beta).matrix();
    const Eigen::VectorXd cx = px / px.sum();
    const Eigen::VectorXd cy = py / py.sum();
    return (weights.array() * (cx - cy).array().square()).sum() / (beta * beta);
}

/// f-divergence D_f(x||y) = sum_i x_i f(y_i / x_i) for convex f with f(1) = 0.
inline DivergenceResult f_divergence(const std::function<double(double)>& f, const Composition& x,
                                     const Composition& y) {
    require_same_dim(x, y);
    const Eigen::VectorXd p = x.closed().parts();
    const Eigen::VectorXd q = y.closed().parts();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) acc += p[i] * f(q[i] / p[i]);
    return {acc, DivergenceKind::f_divergence, "x||y"};
}

/// Euclidean divergence of the squared-Aitchison-norm potential: d_A^2(x, y).
inline DivergenceResult aitchison_divergence(const Composition& x, const Composition& y) {
    return {aitchison_dist2(x, y), DivergenceKind::aitchison, "symmetric"};
}

/// The negative-entropy potential phi over eta coordinates, with its analytic
/// gradient theta(eta). Its Bregman divergence is the relative entropy.
inline ConvexPotential negative_entropy_potential() {
    return {CoordinateSystem::eta,
            [](const Eigen::VectorXd& e) { return phi(EtaCoords(e)); },
            [](const Eigen::VectorXd& e) { return theta_from_eta(EtaCoords(e)).vector(); }};
}

/// The free-energy potential psi over theta coordinates, gradient eta(theta).
/// Its Bregman divergence is the dual relative entropy.
inline ConvexPotential free_energy_potential() {
    return {CoordinateSystem::theta,
            [](const Eigen::VectorXd& t) { return psi(ThetaCoords(t)); },
            [](const Eigen::VectorXd& t) { return eta_from_theta(ThetaCoords(t)).vector(); }};
}

/// The squared Aitchison norm over ilr coordinates, gradient 2z. Its Bregman
/// divergence is the squared Aitchison distance.
inline ConvexPotential aitchison_potential() {
    return {CoordinateSystem::ilr,
            [](const Eigen::VectorXd& z) { return z.squaredNorm(); },
            [](const Eigen::VectorXd& z) { return Eigen::VectorXd(2.0 * z); }};
}

/// Violation of midpoint convexity U((a+b)/2) <= (U(a)+U(b))/2 at one pair;
/// nonpositive values mean the inequality holds.
inline double midpoint_convexity_violation(const ConvexPotential& u, const Composition& a,
                                           const Composition& b) {
    const Eigen::VectorXd ca = detail::potential_coords(u, a);
    const Eigen::VectorXd cb = detail::potential_coords(u, b);
    const double mid = detail::potential_value(u, 0.5 * (ca + cb));
    return mid - 0.5 * (detail::potential_value(u, ca) + detail::potential_value(u, cb));
}

}  // namespace sig
