// Metrics (regret, squared error) and numerical evaluators for the
// closed-form regret/MSE bounds: the OFU regret bound, the OFU inconsistency
// floor, the orthogonal-batch MSE upper/tail bounds (exact finite-t forms and
// the headline t^{-1/2} term), the MSE lower bound, and the Hsu-Kakade-Zhang
// style quadratic-form tail threshold they rest on.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "linbandit/linalg.hpp"
#include "linbandit/policies.hpp"

namespace linbandit {

// Parameters the bound evaluators consume. W0 may be left empty, in which
// case kappa*I is used; evaluators that require a scalar regularizer reject
// anything else.
struct BoundParams {
    double t = 1.0;        // rounds (treated as real, l = t/d)
    int d = 1;
    double sigma = 1.0;
    double kappa = 1.0;
    SymMatrix W0;          // optional explicit regularizer
    double S = 1.0;
    Vector theta_star;     // optional; defaults to S * e1
    double delta = 0.1;

    SymMatrix w0_or_scalar() const {
        if (W0.size() > 0) return W0;
        return kappa * SymMatrix::Identity(d, d);
    }
    Vector theta_or_default() const {
        if (theta_star.size() > 0) return theta_star;
        Vector v = Vector::Zero(d);
        v(0) = S;
        return v;
    }
    void validate() const {
        if (d < 1) throw std::invalid_argument("BoundParams: d must be >= 1");
        if (sigma < 0.0) throw std::invalid_argument("BoundParams: sigma must be >= 0");
        if (!(kappa > 0.0) && W0.size() == 0) {
            throw std::invalid_argument("BoundParams: kappa must be > 0");
        }
    }
    void validate_with_rounds() const {
        validate();
        if (!(t >= 1.0)) throw std::invalid_argument("BoundParams: t must be >= 1");
    }
};

// r = <x*, theta*> - <x, theta*> with x* = theta*/|theta*| the unit-ball maximizer.
inline double instantaneous_regret(const Vector& x, const Vector& theta_star) {
    detail::require_vector_dim(x, theta_star.size(), "instantaneous_regret");
    return std::max(theta_star.norm() - x.dot(theta_star), 0.0);
}

// Prefix sums R_1..R_T over a trajectory; nondecreasing by construction.
inline std::vector<double> cumulative_regret(const Trajectory& traj, const Vector& theta_star) {
    if (traj.records.empty()) {
        throw std::invalid_argument("cumulative_regret: empty trajectory");
    }
    std::vector<double> out;
    out.reserve(traj.records.size());
    double acc = 0.0;
    for (const auto& rec : traj.records) {
        acc += instantaneous_regret(rec.action, theta_star);
        out.push_back(acc);
    }
    return out;
}

inline double squared_error(const Vector& theta_hat, const Vector& theta_star) {
    detail::require_vector_dim(theta_hat, theta_star.size(), "squared_error");
    return (theta_hat - theta_star).squaredNorm();
}

// High-probability cumulative regret bound for the OFU policy with W0 = kappa*I:
//
//   R_n <= 4 sqrt(n d log(kappa + n/d))
//          * (sqrt(kappa) S + sigma^2 sqrt(2 log(1/delta) + d log(1 + n/(kappa d))))
//
// evaluated literally as printed.
inline double ofu_regret_bound(const BoundParams& p, double n) {
    p.validate();
    if (p.W0.size() > 0) {
        const SymMatrix w0 = p.W0;
        for (Eigen::Index i = 0; i < w0.rows(); ++i)
            for (Eigen::Index j = 0; j < w0.cols(); ++j)
                if (std::abs(w0(i, j) - ((i == j) ? p.kappa : 0.0)) > 1e-9) {
                    throw std::invalid_argument("ofu_regret_bound: requires W0 = kappa*I");
                }
    }
    if (n <= 0.0) return 0.0;
    if (!(p.delta > 0.0) || !(p.delta < 1.0)) {
        throw std::invalid_argument("ofu_regret_bound: delta must lie in (0, 1)");
    }
    const double d = static_cast<double>(p.d);
    const double lead = 4.0 * std::sqrt(n * d * std::log(p.kappa + n / d));
    const double conf = std::sqrt(p.kappa) * p.S +
                        p.sigma * p.sigma *
                            std::sqrt(2.0 * std::log(1.0 / p.delta) +
                                      d * std::log(1.0 + n / (p.kappa * d)));
    return lead * conf;
}

// Lower bound on the limiting estimation error of any Hannan-consistent
// (regret-minimizing) policy: sigma^2 (1 - delta).
inline double ofu_inconsistency_floor(double sigma, double delta) {
    if (delta < 0.0 || delta > 1.0) {
        throw std::invalid_argument("ofu_inconsistency_floor: delta must lie in [0, 1]");
    }
    return sigma * sigma * (1.0 - delta);
}

// Exact finite-t MSE upper bound for the orthogonal-batch policy:
//   (d^2/t^2) theta*^T W0^2 theta* + (d^2/t) sigma^2.
inline double mse_upper_bound(const BoundParams& p) {
    p.validate_with_rounds();
    const double d = static_cast<double>(p.d);
    const SymMatrix w0 = p.w0_or_scalar();
    const Vector th = p.theta_or_default();
    detail::require_vector_dim(th, w0.rows(), "mse_upper_bound");
    const double bias = (w0 * th).squaredNorm();  // theta*^T W0^2 theta*
    return d * d / (p.t * p.t) * bias + d * d / p.t * p.sigma * p.sigma;
}

// Headline tail term 3 sigma^2 d^{3/2} / sqrt(t), exposed separately for plots.
inline double mse_tail_leading(const BoundParams& p) {
    p.validate_with_rounds();
    const double d = static_cast<double>(p.d);
    return 3.0 * p.sigma * p.sigma * std::pow(d, 1.5) / std::sqrt(p.t);
}

// Full tail threshold; the squared error exceeds it with probability <= e^{-t}:
//
//   (d^2/t^2) theta*^T W0^2 theta* + sigma^2 (d^2/t + 3 sqrt(d^3/t))
//   + lambda_max(W0) |theta*| (d sigma^2 / t) (d^2/t + 3 sqrt(d^3/t))^{1/2}.
inline double mse_tail_threshold(const BoundParams& p) {
    p.validate_with_rounds();
    const double d = static_cast<double>(p.d);
    const SymMatrix w0 = p.w0_or_scalar();
    const Vector th = p.theta_or_default();
    detail::require_vector_dim(th, w0.rows(), "mse_tail_threshold");
    const double inner = d * d / p.t + 3.0 * std::sqrt(d * d * d / p.t);
    const double lam_max =
        Eigen::SelfAdjointEigenSolver<SymMatrix>(w0).eigenvalues().maxCoeff();
    return d * d / (p.t * p.t) * (w0 * th).squaredNorm() +
           p.sigma * p.sigma * inner +
           lam_max * th.norm() * (d * p.sigma * p.sigma / p.t) * std::sqrt(inner);
}

// Pre-asymptotic MSE lower bound for any adaptive decision sequence:
//   (theta*^T W0^2 theta* + t sigma^2) / (trace(W0) + t)^2,
// which behaves as sigma^2/t for large t.
inline double mse_lower_bound(const BoundParams& p) {
    p.validate_with_rounds();
    const SymMatrix w0 = p.w0_or_scalar();
    const Vector th = p.theta_or_default();
    detail::require_vector_dim(th, w0.rows(), "mse_lower_bound");
    factor_pd(w0, "mse_lower_bound");
    const double num = (w0 * th).squaredNorm() + p.t * p.sigma * p.sigma;
    const double den = w0.trace() + p.t;
    return num / (den * den);
}

// Quadratic-form tail threshold sigma^2 (trace(A^T A) + 2 sqrt(trace((A^T A)^2) u)
// + |A| u): the quadratic exceeds it with probability <= e^{-u}. For the
// orthogonal-batch design matrices the inputs specialize to trace = l d,
// trace of the square = l^2 d and operator norm sqrt(l).
inline double hsu_threshold(double tr_a, double tr_a2, double opnorm, double sigma, double u) {
    if (tr_a < 0.0 || tr_a2 < 0.0 || opnorm < 0.0 || sigma < 0.0 || u < 0.0) {
        throw std::invalid_argument("hsu_threshold: inputs must be nonnegative");
    }
    return sigma * sigma * (tr_a + 2.0 * std::sqrt(tr_a2 * u) + opnorm * u);
}

}  // namespace linbandit
