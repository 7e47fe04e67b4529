#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "linbandit/linalg.hpp"

using namespace linbandit;

namespace {

// Independent naive-loop oracles; intentionally not sharing any code path
// with the implementation.
double naive_triple_product(const Vector& x, const SymMatrix& a) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i)
        for (Eigen::Index j = 0; j < x.size(); ++j) acc += x(i) * a(i, j) * x(j);
    return acc;
}

SymMatrix random_spd(int d, std::mt19937_64& gen) {
    std::normal_distribution<double> dist(0.0, 1.0);
    SymMatrix m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = dist(gen);
    SymMatrix spd = m * m.transpose() + 0.5 * SymMatrix::Identity(d, d);
    return (spd + spd.transpose()) / 2.0;
}

Vector random_vector(int d, std::mt19937_64& gen) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Vector v(d);
    for (int i = 0; i < d; ++i) v(i) = dist(gen);
    return v;
}

}  // namespace

TEST_CASE("weighted_norm basic cases") {
    Vector e1 = Vector::Zero(2);
    e1(0) = 1.0;
    CHECK(weighted_norm(e1, SymMatrix::Identity(2, 2)) == Catch::Approx(1.0));

    Vector ones = Vector::Ones(2);
    SymMatrix diag = Vector{{2.0, 3.0}}.asDiagonal();
    CHECK(weighted_norm(ones, diag) == Catch::Approx(2.23606797749979).epsilon(1e-12));
}

TEST_CASE("weighted_norm matches the naive triple product") {
    std::mt19937_64 gen(101);
    for (int rep = 0; rep < 20; ++rep) {
        const SymMatrix a = random_spd(5, gen);
        const Vector x = random_vector(5, gen);
        const double got = weighted_norm(x, a);
        CHECK(got * got == Catch::Approx(naive_triple_product(x, a)).epsilon(1e-12));
    }
}

TEST_CASE("weighted_norm rejects bad inputs") {
    CHECK_THROWS_AS(weighted_norm(Vector::Ones(3), SymMatrix::Identity(2, 2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(weighted_norm(Vector::Ones(2), -SymMatrix::Identity(2, 2)),
                    std::domain_error);
}

TEST_CASE("rank_one_update basic cases") {
    Vector e1 = Vector::Zero(3);
    e1(0) = 1.0;
    SymMatrix got = rank_one_update(SymMatrix::Identity(3, 3), e1);
    SymMatrix want = Vector{{2.0, 1.0, 1.0}}.asDiagonal();
    CHECK((got - want).cwiseAbs().maxCoeff() == 0.0);

    CHECK((rank_one_update(SymMatrix::Identity(2, 2), Vector::Zero(2)) -
           SymMatrix::Identity(2, 2))
              .cwiseAbs()
              .maxCoeff() == 0.0);

    CHECK_THROWS_AS(rank_one_update(SymMatrix::Identity(2, 2), Vector::Ones(3)),
                    std::invalid_argument);
}

TEST_CASE("rank_one_update matches naive outer product") {
    std::mt19937_64 gen(202);
    const SymMatrix w = random_spd(5, gen);
    const Vector x = random_vector(5, gen);
    const SymMatrix got = rank_one_update(w, x);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            CHECK(got(i, j) == Catch::Approx(w(i, j) + x(i) * x(j)).margin(1e-14));
}

TEST_CASE("repeated rank-1 updates keep the matrix symmetric PD") {
    std::mt19937_64 gen(303);
    SymMatrix w = 0.1 * SymMatrix::Identity(4, 4);
    for (int k = 0; k < 200; ++k) {
        Vector x = random_vector(4, gen);
        x /= std::max(x.norm(), 1.0);
        w = rank_one_update(w, x);
        CHECK(is_symmetric(w));
        CHECK_NOTHROW(factor_pd(w));
    }
}

TEST_CASE("solve_pd basic and residual cases") {
    Vector b{{4.0, 6.0}};
    CHECK((solve_pd(SymMatrix::Identity(2, 2), b) - b).norm() == 0.0);

    const Vector z = solve_pd(2.0 * SymMatrix::Identity(2, 2), b);
    CHECK(z(0) == Catch::Approx(2.0));
    CHECK(z(1) == Catch::Approx(3.0));

    std::mt19937_64 gen(404);
    for (int rep = 0; rep < 20; ++rep) {
        const SymMatrix w = random_spd(5, gen);
        const Vector rhs = random_vector(5, gen);
        const Vector sol = solve_pd(w, rhs);
        CHECK((w * sol - rhs).norm() <= 1e-10 * std::max(1.0, rhs.norm()));
    }

    CHECK_THROWS_AS(solve_pd(-SymMatrix::Identity(2, 2), Vector::Ones(2)), std::domain_error);
}

TEST_CASE("solve_pd inverts multiplication on random vectors") {
    std::mt19937_64 gen(505);
    const SymMatrix w = random_spd(6, gen);
    for (int rep = 0; rep < 20; ++rep) {
        const Vector v = random_vector(6, gen);
        CHECK((solve_pd(w, w * v) - v).norm() <= 1e-10 * std::max(1.0, v.norm()));
    }
}

TEST_CASE("complete_orthonormal_basis forced low-dimensional cases") {
    Vector e1 = Vector::Zero(2);
    e1(0) = 1.0;
    auto basis = complete_orthonormal_basis(e1);
    REQUIRE(basis.size() == 2);
    CHECK((basis[0] - e1).norm() <= 1e-15);
    CHECK(std::abs(std::abs(basis[1](1)) - 1.0) <= 1e-15);
    CHECK(std::abs(basis[1](0)) <= 1e-15);

    Vector diag{{1.0, 1.0}};
    basis = complete_orthonormal_basis(diag);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(basis[0](0) == Catch::Approx(inv_sqrt2).epsilon(1e-12));
    CHECK(basis[0](1) == Catch::Approx(inv_sqrt2).epsilon(1e-12));
    // second vector is +-(1,-1)/sqrt(2)
    CHECK(std::abs(basis[1](0) * basis[1](1) + 0.5) <= 1e-12);
}

TEST_CASE("complete_orthonormal_basis is orthonormal for all small dims") {
    std::mt19937_64 gen(606);
    for (int d = 1; d <= 8; ++d) {
        for (int rep = 0; rep < 25; ++rep) {
            const Vector v = random_vector(d, gen);
            if (v.norm() == 0.0) continue;
            const auto basis = complete_orthonormal_basis(v);
            REQUIRE(basis.size() == static_cast<std::size_t>(d));
            SymMatrix b(d, d);
            for (int i = 0; i < d; ++i) b.row(i) = basis[static_cast<std::size_t>(i)];
            CHECK((b * b.transpose() - SymMatrix::Identity(d, d)).cwiseAbs().maxCoeff() <=
                  1e-12);
            CHECK((b.transpose() * b - SymMatrix::Identity(d, d)).cwiseAbs().maxCoeff() <=
                  1e-12);
            CHECK((basis[0] - v / v.norm()).norm() <= 1e-12);
        }
    }
}

TEST_CASE("complete_orthonormal_basis is deterministic and rejects zero") {
    Vector v{{0.3, -1.2, 0.05, 2.0, -0.7}};
    const auto a = complete_orthonormal_basis(v);
    const auto b = complete_orthonormal_basis(v);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK((a[i] - b[i]).cwiseAbs().maxCoeff() == 0.0);
    }
    CHECK_THROWS_AS(complete_orthonormal_basis(Vector::Zero(3)), std::domain_error);
}
