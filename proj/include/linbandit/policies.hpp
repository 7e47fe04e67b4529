// Action-selection policies and the episode runner.
//
// Three policies over the unit sphere:
//   - ofu:        act along the current estimate every round (the greedy
//                 optimism-in-the-face-of-uncertainty decision reduced to its
//                 closed form on the unit ball);
//   - orth-batch: serve batches of d actions forming an orthonormal basis, one
//                 aligned with the estimate that planned the batch and d-1
//                 orthogonal to it; the estimate refreshes at batch boundaries;
//   - random:     uniform directions, as a baseline.
#pragma once

#include <deque>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "linbandit/environment.hpp"
#include "linbandit/estimator.hpp"
#include "linbandit/linalg.hpp"

namespace linbandit {

enum class PolicyKind { ofu, orth_batch, random_direction };

inline const char* policy_name(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::ofu: return "ofu";
        case PolicyKind::orth_batch: return "orth-batch";
        case PolicyKind::random_direction: return "random";
    }
    return "?";
}

struct TrajectoryRecord {
    long round = 0;      // 1-based, contiguous
    Vector action;
    double reward = 0.0;
    Vector theta_hat;    // estimate snapshot after this round's update
};

struct Trajectory {
    std::vector<TrajectoryRecord> records;
};

// argmax_{|x| <= 1} <x, theta_hat> = theta_hat/|theta_hat|; e1 when the
// estimate is zero (round 1 included).
inline Vector ofu_select(const Vector& theta_hat) {
    const double n = theta_hat.norm();
    if (!(n > 0.0)) {
        Vector e1 = Vector::Zero(theta_hat.size());
        e1(0) = 1.0;
        return e1;
    }
    return theta_hat / n;
}

// Plans the next batch of d decisions: the first along theta_hat, the rest
// completing an orthonormal basis. A zero estimate plans the standard basis,
// which is also the initialization.
inline std::vector<Vector> orth_batch_plan(const Vector& theta_hat, int d) {
    if (d < 1) throw std::invalid_argument("orth_batch_plan: d must be >= 1");
    if (theta_hat.size() != 0 && theta_hat.size() != d) {
        throw std::invalid_argument("orth_batch_plan: estimate dimension mismatch");
    }
    if (theta_hat.size() == 0 || !(theta_hat.norm() > 0.0)) {
        std::vector<Vector> basis;
        basis.reserve(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i) {
            Vector e = Vector::Zero(d);
            e(i) = 1.0;
            basis.push_back(std::move(e));
        }
        return basis;
    }
    return complete_orthonormal_basis(theta_hat);
}

struct PolicyState {
    PolicyKind kind = PolicyKind::ofu;
    EstimatorState est;
    std::deque<Vector> pending;  // unserved remainder of the current batch (orth-batch)
    long round = 0;
    Vector theta_snapshot;       // policy-visible estimate

    PolicyState(PolicyKind k, const SymMatrix& w0)
        : kind(k), est(w0), theta_snapshot(Vector::Zero(w0.rows())) {}

    Vector select(std::mt19937_64& action_rng) {
        switch (kind) {
            case PolicyKind::ofu:
                return ofu_select(theta_snapshot);
            case PolicyKind::orth_batch: {
                if (pending.empty()) {
                    auto batch = orth_batch_plan(theta_snapshot,
                                                 static_cast<int>(theta_snapshot.size()));
                    pending.assign(std::make_move_iterator(batch.begin()),
                                   std::make_move_iterator(batch.end()));
                }
                Vector x = std::move(pending.front());
                pending.pop_front();
                return x;
            }
            case PolicyKind::random_direction:
                return sample_theta(static_cast<int>(theta_snapshot.size()), 1.0, action_rng);
        }
        throw std::logic_error("PolicyState::select: unknown policy kind");
    }

    void observe(const Vector& x, double y) {
        est.update(x, y);
        ++round;
        if (kind == PolicyKind::orth_batch) {
            // Estimate refreshes only once a full batch of d rewards is in.
            if (round % est.W().rows() == 0) theta_snapshot = est.estimate();
        } else {
            theta_snapshot = est.estimate();
        }
    }
};

// Runs T rounds of select -> reward -> update. Noise draws come from
// noise_rng; the random policy draws its directions from action_rng so that
// pairing policies on a common noise stream stays meaningful.
inline Trajectory run_episode(PolicyKind kind, const EnvironmentSpec& env, long T,
                              const SymMatrix& w0, std::mt19937_64& noise_rng,
                              std::mt19937_64& action_rng) {
    if (T < 1) throw std::invalid_argument("run_episode: T must be >= 1");
    if (w0.rows() != env.theta_star.size()) {
        throw std::invalid_argument("run_episode: W0 dimension does not match environment");
    }
    PolicyState state(kind, w0);
    Trajectory traj;
    traj.records.reserve(static_cast<std::size_t>(T));
    for (long r = 1; r <= T; ++r) {
        Vector x = state.select(action_rng);
        const double y = reward(x, env, noise_rng);
        state.observe(x, y);
        traj.records.push_back(TrajectoryRecord{r, std::move(x), y, state.theta_snapshot});
    }
    return traj;
}

}  // namespace linbandit
