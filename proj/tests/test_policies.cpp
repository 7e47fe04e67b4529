#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "linbandit/policies.hpp"
#include "linbandit/rng.hpp"

using namespace linbandit;

namespace {

Vector unit_vector(int d, int axis) {
    Vector e = Vector::Zero(d);
    e(axis) = 1.0;
    return e;
}

EnvironmentSpec make_env(Vector theta, double sigma) {
    const double s = std::max(theta.norm(), 1e-9);
    return EnvironmentSpec(std::move(theta), s, NoiseModel{NoiseKind::gaussian, sigma});
}

Trajectory episode(PolicyKind kind, const EnvironmentSpec& env, long T, double kappa,
                   std::uint64_t seed) {
    const SymMatrix w0 = kappa * SymMatrix::Identity(env.d, env.d);
    auto noise = rng::substream(seed, 0, 1, rng::kPurposeNoise);
    auto action = rng::substream(seed, 0, 1, rng::kPurposeAction);
    return run_episode(kind, env, T, w0, noise, action);
}

}  // namespace

TEST_CASE("ofu_select normalizes and falls back to e1") {
    CHECK((ofu_select(unit_vector(3, 0)) - unit_vector(3, 0)).norm() == 0.0);

    const Vector x = ofu_select(Vector{{3.0, 4.0}});
    CHECK(x(0) == Catch::Approx(0.6).epsilon(1e-14));
    CHECK(x(1) == Catch::Approx(0.8).epsilon(1e-14));

    CHECK((ofu_select(Vector::Zero(4)) - unit_vector(4, 0)).norm() == 0.0);
}

TEST_CASE("orth_batch_plan covers the documented cases") {
    // no estimate yet -> standard basis
    auto basis = orth_batch_plan(Vector::Zero(3), 3);
    REQUIRE(basis.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK((basis[i] - unit_vector(3, i)).norm() == 0.0);

    // estimate along e2 in d=2 -> {e2, +-e1}
    basis = orth_batch_plan(unit_vector(2, 1), 2);
    CHECK((basis[0] - unit_vector(2, 1)).norm() <= 1e-15);
    CHECK(std::abs(std::abs(basis[1](0)) - 1.0) <= 1e-15);

    // any estimate in d=5 -> orthonormal batch
    Vector theta{{0.1, -2.0, 0.4, 0.0, 1.0}};
    basis = orth_batch_plan(theta, 5);
    SymMatrix b(5, 5);
    for (int i = 0; i < 5; ++i) b.row(i) = basis[static_cast<std::size_t>(i)];
    CHECK((b * b.transpose() - SymMatrix::Identity(5, 5)).cwiseAbs().maxCoeff() <= 1e-12);

    CHECK_THROWS_AS(orth_batch_plan(Vector::Zero(3), 2), std::invalid_argument);
}

TEST_CASE("orth-batch serves the standard basis first, then orthonormal batches") {
    const int d = 4;
    std::mt19937_64 gen(21);
    const Vector theta = sample_theta(d, 1.0, gen);
    const auto traj = episode(PolicyKind::orth_batch, make_env(theta, 0.5), 3 * d, 1.0, 99);
    REQUIRE(traj.records.size() == static_cast<std::size_t>(3 * d));

    for (int i = 0; i < d; ++i) {
        CHECK((traj.records[static_cast<std::size_t>(i)].action - unit_vector(d, i)).norm() ==
              0.0);
    }

    // every served batch of d consecutive actions has Gram matrix I
    for (int k = 0; k < 3; ++k) {
        SymMatrix b(d, d);
        for (int i = 0; i < d; ++i) {
            b.row(i) = traj.records[static_cast<std::size_t>(k * d + i)].action;
        }
        CHECK((b * b.transpose() - SymMatrix::Identity(d, d)).cwiseAbs().maxCoeff() <= 1e-12);
    }

    // one action per batch parallel to the estimate that planned it, the rest
    // orthogonal to it
    for (int k = 1; k < 3; ++k) {
        const Vector planner = traj.records[static_cast<std::size_t>(k * d - 1)].theta_hat;
        if (!(planner.norm() > 0)) continue;
        int parallel = 0, orthogonal = 0;
        for (int i = 0; i < d; ++i) {
            const Vector& x = traj.records[static_cast<std::size_t>(k * d + i)].action;
            const double ip = std::abs(x.dot(planner));
            if (std::abs(ip - planner.norm()) <= 1e-10 * planner.norm()) {
                ++parallel;
            } else if (ip <= 1e-10 * planner.norm()) {
                ++orthogonal;
            }
        }
        CHECK(parallel == 1);
        CHECK(orthogonal == d - 1);
    }
}

TEST_CASE("all policies act on the unit sphere with contiguous rounds") {
    std::mt19937_64 gen(22);
    const Vector theta = sample_theta(5, 1.0, gen);
    const EnvironmentSpec env = make_env(theta, 1.0);
    for (PolicyKind kind :
         {PolicyKind::ofu, PolicyKind::orth_batch, PolicyKind::random_direction}) {
        const auto traj = episode(kind, env, 37, 1.0, 5);
        REQUIRE(traj.records.size() == 37);
        long expect = 1;
        for (const auto& rec : traj.records) {
            CHECK(rec.round == expect++);
            CHECK(std::abs(rec.action.norm() - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("noiseless rewards equal the inner product for the random policy") {
    std::mt19937_64 gen(23);
    const Vector theta = sample_theta(3, 1.0, gen);
    const auto traj = episode(PolicyKind::random_direction, make_env(theta, 0.0), 3, 1.0, 7);
    for (const auto& rec : traj.records) {
        CHECK(rec.reward == rec.action.dot(theta));
    }
}

TEST_CASE("orth-batch Gram identity: W equals (kappa + l) I after l batches") {
    const int d = 5;
    std::mt19937_64 gen(24);
    const Vector theta = sample_theta(d, 1.0, gen);
    const EnvironmentSpec env = make_env(theta, 1.0);
    const SymMatrix w0 = SymMatrix::Identity(d, d);
    auto noise = rng::substream(3, 0, 1, rng::kPurposeNoise);
    auto action = rng::substream(3, 0, 1, rng::kPurposeAction);

    const long l = 40;
    PolicyState state(PolicyKind::orth_batch, w0);
    for (long r = 1; r <= l * d; ++r) {
        const Vector x = state.select(action);
        state.observe(x, reward(x, env, noise));
    }
    CHECK((state.est.W() - (1.0 + static_cast<double>(l)) * SymMatrix::Identity(d, d))
              .cwiseAbs()
              .maxCoeff() <= 1e-10);
}

TEST_CASE("ofu actions stay parallel to the current estimate") {
    std::mt19937_64 gen(25);
    const Vector theta = sample_theta(4, 1.0, gen);
    const auto traj = episode(PolicyKind::ofu, make_env(theta, 0.7), 50, 1.0, 11);
    for (std::size_t i = 1; i < traj.records.size(); ++i) {
        const Vector& prev_est = traj.records[i - 1].theta_hat;
        if (!(prev_est.norm() > 0)) continue;
        const double ip = traj.records[i].action.dot(prev_est);
        CHECK(std::abs(ip - prev_est.norm()) <= 1e-10 * prev_est.norm());
    }
}

TEST_CASE("orth-batch estimate snapshots change only at batch boundaries") {
    const int d = 5;
    std::mt19937_64 gen(26);
    const Vector theta = sample_theta(d, 1.0, gen);
    const auto traj = episode(PolicyKind::orth_batch, make_env(theta, 1.0), 23, 1.0, 13);
    for (std::size_t i = 0; i < traj.records.size(); ++i) {
        const long r = traj.records[i].round;
        if (r % d != 0) {
            const Vector prev = (i == 0) ? Vector(Vector::Zero(d)) : traj.records[i - 1].theta_hat;
            CHECK((traj.records[i].theta_hat - prev).cwiseAbs().maxCoeff() == 0.0);
        }
    }
    // final snapshot is the one from the last completed batch (round 20 of 23)
    const Vector& last = traj.records.back().theta_hat;
    CHECK((last - traj.records[19].theta_hat).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("replaying a trajectory reproduces the estimate snapshots bit-for-bit") {
    const int d = 5;
    std::mt19937_64 gen(27);
    const Vector theta = sample_theta(d, 1.0, gen);
    for (PolicyKind kind : {PolicyKind::ofu, PolicyKind::orth_batch}) {
        const auto traj = episode(kind, make_env(theta, 1.0), 47, 0.5, 17);
        EstimatorState replay(0.5 * SymMatrix::Identity(d, d));
        Vector snapshot = Vector::Zero(d);
        for (const auto& rec : traj.records) {
            replay.update(rec.action, rec.reward);
            const bool refresh =
                kind != PolicyKind::orth_batch || rec.round % d == 0;
            if (refresh) snapshot = replay.estimate();
            CHECK((snapshot - rec.theta_hat).cwiseAbs().maxCoeff() == 0.0);
        }
    }
}

TEST_CASE("run_episode validates its inputs") {
    std::mt19937_64 gen(28);
    const Vector theta = sample_theta(3, 1.0, gen);
    const EnvironmentSpec env = make_env(theta, 1.0);
    auto noise = rng::substream(1, 0, 1, rng::kPurposeNoise);
    auto action = rng::substream(1, 0, 1, rng::kPurposeAction);
    CHECK_THROWS_AS(
        run_episode(PolicyKind::ofu, env, 0, SymMatrix::Identity(3, 3), noise, action),
        std::invalid_argument);
    CHECK_THROWS_AS(
        run_episode(PolicyKind::ofu, env, 5, SymMatrix::Identity(2, 2), noise, action),
        std::invalid_argument);
}
