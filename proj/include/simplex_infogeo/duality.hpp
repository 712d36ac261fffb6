#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <cmath>
#include <string>

#include "simplex_infogeo/composition.hpp"
#include "simplex_infogeo/errors.hpp"

namespace sig {

/// Margin below which eta coordinates count as on the simplex boundary.
inline constexpr double kEtaBoundaryMargin = 1e-14;

/// Natural parameters theta^i = log(x_i / x_D), i = 1..D-1.
class ThetaCoords {
public:
    explicit ThetaCoords(Eigen::VectorXd v) : v_(std::move(v)) {
        if (v_.size() < 1) throw DimensionTooSmall("theta needs at least one coordinate");
        if (!v_.allFinite()) throw OutOfDomain("theta coordinates must be finite");
    }
    ThetaCoords(std::initializer_list<double> v)
        : ThetaCoords(Eigen::Map<const Eigen::VectorXd>(v.begin(),
                                                        static_cast<Eigen::Index>(v.size()))) {}

    int size() const { return static_cast<int>(v_.size()); }
    double operator[](int i) const { return v_[i]; }
    const Eigen::VectorXd& vector() const { return v_; }

private:
    Eigen::VectorXd v_;
};

/// Expectation parameters eta = (x_1, ..., x_{D-1}) of a closed composition:
/// interior of the unit simplex, all entries positive, sum below one.
class EtaCoords {
public:
    explicit EtaCoords(Eigen::VectorXd v) : v_(std::move(v)) {
        if (v_.size() < 1) throw DimensionTooSmall("eta needs at least one coordinate");
        for (Eigen::Index i = 0; i < v_.size(); ++i)
            if (!(v_[i] > kEtaBoundaryMargin))
                throw OutOfDomain("eta coordinate " + std::to_string(i + 1) +
                                  " is not inside the simplex interior");
        if (!(1.0 - v_.sum() > kEtaBoundaryMargin))
            throw OutOfDomain("eta coordinates sum to " + std::to_string(v_.sum()) +
                              "; must stay below one");
    }
    EtaCoords(std::initializer_list<double> v)
        : EtaCoords(Eigen::Map<const Eigen::VectorXd>(v.begin(),
                                                      static_cast<Eigen::Index>(v.size()))) {}

    int size() const { return static_cast<int>(v_.size()); }
    double operator[](int i) const { return v_[i]; }
    const Eigen::VectorXd& vector() const { return v_; }
    /// Probability of the reference (D-th) category.
    double last() const { return 1.0 - v_.sum(); }

private:
    Eigen::VectorXd v_;
};

inline ThetaCoords theta_of(const Composition& x) { return ThetaCoords(alr(x)); }

inline EtaCoords eta_of(const Composition& x) {
    const Composition c = x.closed();
    return EtaCoords(c.parts().head(c.size() - 1));
}

inline Composition composition_from_theta(const ThetaCoords& theta) {
    return alr_inv(theta.vector());
}

inline Composition composition_from_eta(const EtaCoords& eta) {
    Eigen::VectorXd parts(eta.size() + 1);
    parts.head(eta.size()) = eta.vector();
    parts[eta.size()] = eta.last();
    return Composition(parts);
}

/// Free energy psi(theta) = log(1 + sum_i e^{theta^i}) = -log x_D,
/// evaluated in shifted form so |theta^i| up to ~700 cannot overflow.
inline double psi(const ThetaCoords& theta) {
    const auto& t = theta.vector();
    const double shift = std::max(0.0, t.maxCoeff());
    double acc = std::exp(-shift);
    for (Eigen::Index i = 0; i < t.size(); ++i) acc += std::exp(t[i] - shift);
    return shift + std::log(acc);
}

/// Negative Shannon entropy phi(eta) = sum_i eta_i log eta_i + eta_D log eta_D,
/// the Legendre conjugate of psi.
inline double phi(const EtaCoords& eta) {
    const auto& e = eta.vector();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < e.size(); ++i) acc += e[i] * std::log(e[i]);
    const double last = eta.last();
    acc += last * std::log(last);
    return acc;
}

/// Legendre map eta = grad psi(theta): the softmax probabilities.
inline EtaCoords eta_from_theta(const ThetaCoords& theta) {
    const auto& t = theta.vector();
    const double shift = std::max(0.0, t.maxCoeff());
    double denom = std::exp(-shift);
    Eigen::VectorXd num(t.size());
    for (Eigen::Index i = 0; i < t.size(); ++i) {
        num[i] = std::exp(t[i] - shift);
        denom += num[i];
    }
    return EtaCoords(num / denom);
}

/// Legendre map theta = grad phi(eta): log-odds against the reference category.
inline ThetaCoords theta_from_eta(const EtaCoords& eta) {
    const double log_last = std::log(eta.last());
    Eigen::VectorXd t(eta.size());
    for (int i = 0; i < eta.size(); ++i) t[i] = std::log(eta[i]) - log_last;
    return ThetaCoords(t);
}

/// Young-Fenchel gap psi(theta_x) + phi(eta_y) - theta_x . eta_y.
/// Nonnegative; zero exactly when the closed compositions coincide.
inline double fenchel_gap(const Composition& x, const Composition& y) {
    require_same_dim(x, y);
    const ThetaCoords tx = theta_of(x);
    const EtaCoords ey = eta_of(y);
    return psi(tx) + phi(ey) - tx.vector().dot(ey.vector());
}

enum class CoordinateSystem { theta, eta, ilr };

/// Fisher information matrix in one of the two dual coordinate systems.
struct FisherMatrix {
    Eigen::MatrixXd g;
    CoordinateSystem coordinate_system;

    /// Cholesky-based positive definiteness check.
    bool is_positive_definite() const {
        Eigen::LLT<Eigen::MatrixXd> llt(g);
        return llt.info() == Eigen::Success;
    }
};

/// Fisher matrix in theta coordinates: the multinomial covariance
/// g_ij = eta_i (delta_ij - eta_j), the Hessian of psi.
inline FisherMatrix fisher_theta(const ThetaCoords& theta) {
    const Eigen::VectorXd eta = eta_from_theta(theta).vector();
    Eigen::MatrixXd g = -eta * eta.transpose();
    g.diagonal() = eta.array() * (1.0 - eta.array());
    return {std::move(g), CoordinateSystem::theta};
}

/// Fisher matrix in eta coordinates: the Hessian of phi,
/// g^ij = delta_ij / eta_i + 1 / eta_D, inverse of fisher_theta.
inline FisherMatrix fisher_eta(const EtaCoords& eta) {
    const double inv_last = 1.0 / eta.last();
    Eigen::MatrixXd g = Eigen::MatrixXd::Constant(eta.size(), eta.size(), inv_last);
    for (int i = 0; i < eta.size(); ++i) g(i, i) += 1.0 / eta[i];
    return {std::move(g), CoordinateSystem::eta};
}

/// Paired dual coordinates of one composition with both potentials cached.
struct DualCoords {
    ThetaCoords theta;
    EtaCoords eta;
    double psi_value;
    double phi_value;

    static DualCoords of(const Composition& x) {
        ThetaCoords t = theta_of(x);
        EtaCoords e = eta_of(x);
        const double pv = psi(t);
        const double fv = phi(e);
        return {std::move(t), std::move(e), pv, fv};
    }
};

/// Discrete exponential family p(r) = p0(r) exp(sum_k theta^k X_k(r) - psi(theta))
/// over D states with d <= D-1 feature functions given as a D x d table.
class ExponentialFamily {
public:
    ExponentialFamily(Composition base, Eigen::MatrixXd features, ThetaCoords theta)
        : base_(std::move(base)), features_(std::move(features)), theta_(std::move(theta)) {
        if (features_.rows() != base_.size())
            throw DimensionMismatch("feature table has " + std::to_string(features_.rows()) +
                                    " rows for " + std::to_string(base_.size()) + " states");
        if (features_.cols() < 1 || features_.cols() > base_.size() - 1)
            throw DimensionMismatch("feature count must satisfy 1 <= d <= D-1");
        if (theta_.size() != features_.cols())
            throw DimensionMismatch("theta length " + std::to_string(theta_.size()) +
                                    " does not match feature count " +
                                    std::to_string(features_.cols()));
        if (!features_.allFinite()) throw OutOfDomain("feature table must be finite");
    }

    const Composition& base() const { return base_; }
    const Eigen::MatrixXd& features() const { return features_; }
    const ThetaCoords& theta() const { return theta_; }

    /// True when every state has the same feature vector; the family then
    /// collapses to the base measure for every theta.
    bool degenerate_features() const {
        for (Eigen::Index r = 1; r < features_.rows(); ++r)
            if ((features_.row(r) - features_.row(0)).cwiseAbs().maxCoeff() > 0.0) return false;
        return true;
    }

private:
    Composition base_;
    Eigen::MatrixXd features_;
    ThetaCoords theta_;
};

namespace detail {

/// Unnormalized log-weights log p0(r) + sum_k theta^k X_k(r) over the closed base.
inline Eigen::VectorXd expfam_log_weights(const ExponentialFamily& fam) {
    const Composition base = fam.base().closed();
    Eigen::VectorXd lw = fam.features() * fam.theta().vector();
    for (int r = 0; r < base.size(); ++r) lw[r] += std::log(base[r]);
    return lw;
}

}  // namespace detail

/// Log-normalizer of a general family, computed as a shifted log-sum-exp.
inline double expfam_psi(const ExponentialFamily& fam) {
    const Eigen::VectorXd lw = detail::expfam_log_weights(fam);
    const double shift = lw.maxCoeff();
    return shift + std::log((lw.array() - shift).exp().sum());
}

/// The distribution the family evaluates to at its theta: a closed composition.
inline Composition expfam_eval(const ExponentialFamily& fam) {
    Eigen::VectorXd lw = detail::expfam_log_weights(fam);
    lw.array() -= lw.maxCoeff();
    return close(Eigen::VectorXd(lw.array().exp().matrix()));
}

/// Fisher matrix of a general family: the d x d covariance of the features
/// under the evaluated distribution. Positive semidefinite; definite when the
/// features are affinely independent.
inline FisherMatrix expfam_fisher(const ExponentialFamily& fam) {
    const Eigen::VectorXd p = expfam_eval(fam).parts();
    const Eigen::MatrixXd& x = fam.features();
    const Eigen::RowVectorXd mean = p.transpose() * x;
    const Eigen::MatrixXd centered = x.rowwise() - mean;
    Eigen::MatrixXd g = centered.transpose() * p.asDiagonal() * centered;
    g = 0.5 * (g + g.transpose());  // enforce exact symmetry
    return {std::move(g), CoordinateSystem::theta};
}

}  // namespace sig
