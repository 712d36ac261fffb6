#pragma once

// Shared test machinery: seeded generators and finite-difference oracles.
// The oracles are deliberately independent of the library's analytic paths.

#include <Eigen/Core>

#include <random>
#include <vector>

#include "simplex_infogeo/aggregation.hpp"
#include "simplex_infogeo/composition.hpp"

namespace testsup {

using Rng = std::mt19937_64;

/// Parts drawn i.i.d. from a unit-rate exponential, then closed: uniform on
/// the simplex, including the boundary-adjacent region.
inline sig::Composition random_composition(Rng& rng, int dim) {
    std::exponential_distribution<double> exp1(1.0);
    Eigen::VectorXd parts(dim);
    for (int i = 0; i < dim; ++i) {
        double v = exp1(rng);
        while (v <= 0.0) v = exp1(rng);
        parts[i] = v;
    }
    return sig::close(parts);
}

/// Composition mixed toward the centre: every part at least lambda/dim.
/// Keeps finite-difference Hessians of phi well-conditioned.
inline sig::Composition random_interior_composition(Rng& rng, int dim, double lambda = 0.5) {
    const sig::Composition x = random_composition(rng, dim);
    Eigen::VectorXd parts = (1.0 - lambda) * x.parts() +
                            Eigen::VectorXd::Constant(dim, lambda / dim);
    return sig::close(parts);
}

inline Eigen::VectorXd random_theta(Rng& rng, int len, double lo = -10.0, double hi = 10.0) {
    std::uniform_real_distribution<double> unif(lo, hi);
    Eigen::VectorXd t(len);
    for (int i = 0; i < len; ++i) t[i] = unif(rng);
    return t;
}

/// Random proper subset of {0, .., dim-1}: 1 <= size <= dim-1.
inline sig::PartSubset random_subset(Rng& rng, int dim) {
    std::uniform_int_distribution<int> size_dist(1, dim - 1);
    const int size = size_dist(rng);
    std::vector<int> all(dim);
    for (int i = 0; i < dim; ++i) all[i] = i;
    std::shuffle(all.begin(), all.end(), rng);
    return sig::PartSubset(dim, std::vector<int>(all.begin(), all.begin() + size));
}

/// Sequential binary partition splitting contiguous ranges in half.
inline Eigen::MatrixXi halving_sbp(int dim) {
    Eigen::MatrixXi sbp = Eigen::MatrixXi::Zero(dim - 1, dim);
    std::vector<std::pair<int, int>> queue = {{0, dim}};  // [begin, end)
    int row = 0;
    while (!queue.empty()) {
        const auto [b, e] = queue.front();
        queue.erase(queue.begin());
        if (e - b < 2) continue;
        const int mid = b + (e - b) / 2;
        for (int i = b; i < mid; ++i) sbp(row, i) = 1;
        for (int i = mid; i < e; ++i) sbp(row, i) = -1;
        ++row;
        queue.emplace_back(b, mid);
        queue.emplace_back(mid, e);
    }
    return sbp;
}

/// Central-difference gradient oracle, step 1e-5.
template <class F>
Eigen::VectorXd fd_gradient(F f, const Eigen::VectorXd& x, double h = 1e-5) {
    Eigen::VectorXd g(x.size());
    Eigen::VectorXd p = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        p[i] = x[i] + h;
        const double up = f(p);
        p[i] = x[i] - h;
        const double dn = f(p);
        p[i] = x[i];
        g[i] = (up - dn) / (2.0 * h);
    }
    return g;
}

/// Central-difference Hessian oracle, step 1e-4.
template <class F>
Eigen::MatrixXd fd_hessian(F f, const Eigen::VectorXd& x, double h = 1e-4) {
    const Eigen::Index n = x.size();
    Eigen::MatrixXd hess(n, n);
    Eigen::VectorXd p = x;
    const double f0 = f(x);
    for (Eigen::Index i = 0; i < n; ++i) {
        p[i] = x[i] + h;
        const double up = f(p);
        p[i] = x[i] - h;
        const double dn = f(p);
        p[i] = x[i];
        hess(i, i) = (up - 2.0 * f0 + dn) / (h * h);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            p[i] = x[i] + h;
            p[j] = x[j] + h;
            const double pp = f(p);
            p[j] = x[j] - h;
            const double pm = f(p);
            p[i] = x[i] - h;
            const double mm = f(p);
            p[j] = x[j] + h;
            const double mp = f(p);
            p[i] = x[i];
            p[j] = x[j];
            hess(i, j) = hess(j, i) = (pp - pm - mp + mm) / (4.0 * h * h);
        }
    }
    return hess;
}

inline double max_abs_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const sig::Composition& a, const sig::Composition& b) {
    return max_abs_diff(Eigen::VectorXd(a.closed().parts()), Eigen::VectorXd(b.closed().parts()));
}

}  // namespace testsup
