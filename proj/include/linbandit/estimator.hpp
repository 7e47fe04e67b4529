// Regularized least-squares estimator
//
//   theta_hat_t = (X_t^T X_t + W0)^{-1} X_t^T Y_t
//
// with recursive state W_t = W_{t-1} + x_t x_t^T, s_t = s_{t-1} + y_t x_t.
// The determinant of W_t is maintained as a running log-det through the rank-1
// identity det(W + xx^T) = det(W) (1 + x^T W^{-1} x), which cannot overflow.
#pragma once

#include <cmath>
#include <stdexcept>

#include "linbandit/linalg.hpp"

namespace linbandit {

class EstimatorState {
  public:
    explicit EstimatorState(const SymMatrix& w0)
        : w_(w0), w0_(w0), s_(Vector::Zero(w0.rows())), t_(0) {
        logdet_w0_ = logdet_pd(w0);  // throws domain_error unless PD
        logdet_w_ = logdet_w0_;
    }

    void update(const Vector& x, double y) {
        detail::require_vector_dim(x, w_.rows(), "EstimatorState::update");
        if (x.norm() > 1.0 + 1e-9) {
            throw std::invalid_argument("EstimatorState::update: |x| must be <= 1");
        }
        logdet_w_ += std::log1p(x.dot(solve_pd(w_, x)));
        w_ += x * x.transpose();
        s_ += y * x;
        ++t_;
    }

    // Recomputed on demand; t = 0 gives the zero vector since s = 0.
    Vector estimate() const { return solve_pd(w_, s_); }

    // Confidence-ellipsoid radius beta_t for W0 = kappa*I:
    //
    //   beta_t = sigma * sqrt(2 log(det(W_t)^{1/2} det(kappa I)^{-1/2} / delta))
    //            + sqrt(kappa) * S
    //
    // literal_sigma_sq = true replaces the leading sigma by sigma^2, matching
    // the formula as some sources print it; the default uses the first power.
    double confidence_radius(double delta, double sigma, double S, double kappa,
                             bool literal_sigma_sq = false) const {
        if (!(delta > 0.0) || delta > 1.0) {
            throw std::invalid_argument("confidence_radius: delta must lie in (0, 1]");
        }
        if (!(kappa > 0.0)) {
            throw std::invalid_argument("confidence_radius: kappa must be > 0");
        }
        for (Eigen::Index i = 0; i < w0_.rows(); ++i) {
            for (Eigen::Index j = 0; j < w0_.cols(); ++j) {
                const double expect = (i == j) ? kappa : 0.0;
                if (std::abs(w0_(i, j) - expect) > 1e-9 * std::max(1.0, kappa)) {
                    throw std::invalid_argument("confidence_radius: W0 must equal kappa*I");
                }
            }
        }
        const double log_ratio =
            std::max(0.5 * (logdet_w_ - logdet_w0_) + std::log(1.0 / delta), 0.0);
        const double scale = literal_sigma_sq ? sigma * sigma : sigma;
        return scale * std::sqrt(2.0 * log_ratio) + std::sqrt(kappa) * S;
    }

    const SymMatrix& W() const { return w_; }
    const SymMatrix& W0() const { return w0_; }
    const Vector& s() const { return s_; }
    long rounds() const { return t_; }
    double logdet_w() const { return logdet_w_; }
    double logdet_w0() const { return logdet_w0_; }

  private:
    SymMatrix w_;
    SymMatrix w0_;
    Vector s_;
    long t_;
    double logdet_w0_ = 0.0;
    double logdet_w_ = 0.0;
};

}  // namespace linbandit
