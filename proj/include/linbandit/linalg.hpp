// Small dense symmetric-PD linear algebra used throughout the library:
// weighted norms, rank-1 updates, PD solves and orthonormal-basis completion.
// Dimensions are small (a handful), everything is double precision.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace linbandit {

using Vector = Eigen::VectorXd;
using SymMatrix = Eigen::MatrixXd;  // symmetric by contract, checked at entry points

namespace detail {

inline void require_vector_dim(const Vector& x, Eigen::Index d, const char* what) {
    if (x.size() != d) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                    std::to_string(x.size()) + " vs " + std::to_string(d) + ")");
    }
}

inline void require_square(const SymMatrix& a, const char* what) {
    if (a.rows() != a.cols() || a.rows() < 1) {
        throw std::invalid_argument(std::string(what) + ": matrix must be square and non-empty");
    }
}

}  // namespace detail

// |A_ij - A_ji| <= tol * max(1, |A_ij|) entrywise.
inline bool is_symmetric(const SymMatrix& a, double tol = 1e-12) {
    if (a.rows() != a.cols()) return false;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < a.cols(); ++j) {
            if (std::abs(a(i, j) - a(j, i)) > tol * std::max(1.0, std::abs(a(i, j)))) {
                return false;
            }
        }
    }
    return true;
}

// Cholesky factorization of a symmetric positive-definite matrix.
// Throws std::domain_error if the matrix is not PD within working precision.
inline Eigen::LLT<SymMatrix> factor_pd(const SymMatrix& w, const char* what = "factor_pd") {
    detail::require_square(w, what);
    if (!is_symmetric(w)) {
        throw std::domain_error(std::string(what) + ": matrix is not symmetric");
    }
    Eigen::LLT<SymMatrix> llt(w);
    if (llt.info() != Eigen::Success) {
        throw std::domain_error(std::string(what) + ": matrix is not positive definite");
    }
    return llt;
}

// log det(W) for PD W, via the Cholesky factor (no overflow for large dims/entries).
inline double logdet_pd(const SymMatrix& w) {
    return 2.0 * factor_pd(w, "logdet_pd").matrixLLT().diagonal().array().log().sum();
}

// sqrt(x^T A x) for PD A. Zero iff x = 0.
inline double weighted_norm(const Vector& x, const SymMatrix& a) {
    detail::require_square(a, "weighted_norm");
    detail::require_vector_dim(x, a.rows(), "weighted_norm");
    factor_pd(a, "weighted_norm");  // PD is a precondition, not an assumption
    const double q = x.dot(a * x);
    return std::sqrt(std::max(q, 0.0));
}

// W + x x^T. The outer product is exactly symmetric, so the result stays symmetric.
inline SymMatrix rank_one_update(const SymMatrix& w, const Vector& x) {
    detail::require_square(w, "rank_one_update");
    detail::require_vector_dim(x, w.rows(), "rank_one_update");
    return w + x * x.transpose();
}

// Solves W z = b for PD W without forming an inverse.
inline Vector solve_pd(const SymMatrix& w, const Vector& b) {
    detail::require_square(w, "solve_pd");
    detail::require_vector_dim(b, w.rows(), "solve_pd");
    return factor_pd(w, "solve_pd").solve(b);
}

// Completes v into an orthonormal basis b_1..b_d with b_1 = v/|v|.
//
// Uses the Householder reflector H = I - 2uu^T that maps e_1 onto s*v/|v|,
// with the sign s chosen so the construction never cancels; the columns of H
// are the basis (the first one is flipped back to +v/|v| when s = -1).
// Deterministic for fixed v, O(d^2).
inline std::vector<Vector> complete_orthonormal_basis(const Vector& v) {
    const Eigen::Index d = v.size();
    if (d < 1) throw std::invalid_argument("complete_orthonormal_basis: empty vector");
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw std::domain_error("complete_orthonormal_basis: zero or non-finite input");
    }

    std::vector<Vector> basis;
    basis.reserve(static_cast<std::size_t>(d));
    Vector vhat = v / n;
    basis.push_back(vhat);
    if (d == 1) return basis;

    const double s = (vhat(0) >= 0.0) ? -1.0 : 1.0;
    Vector u = -s * vhat;
    u(0) += 1.0;                       // u = e1 - s*vhat, |u|^2 = 2(1 + |vhat_1|) >= 2
    u /= u.norm();
    for (Eigen::Index i = 1; i < d; ++i) {
        Vector b = -2.0 * u(i) * u;    // column i of H
        b(i) += 1.0;
        basis.push_back(std::move(b));
    }
    return basis;
}

}  // namespace linbandit
