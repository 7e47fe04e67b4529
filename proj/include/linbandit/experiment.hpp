// Monte Carlo experiment runner. Trials are embarrassingly parallel; each
// trial derives its own RNG streams from (seed, trial, policy, purpose), and
// aggregation happens in fixed chunk order, so emitted numbers are
// byte-identical at any worker count.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "linbandit/analysis.hpp"
#include "linbandit/environment.hpp"
#include "linbandit/policies.hpp"
#include "linbandit/rng.hpp"

namespace linbandit {

enum class ThetaMode { resample_per_trial, fixed };

struct ExperimentConfig {
    int d = 5;
    long rounds = 3000;
    long trials = 1000;
    std::vector<PolicyKind> policies = {PolicyKind::ofu, PolicyKind::orth_batch};
    double sigma = 1.0;
    double kappa = 1.0;
    double theta_norm = 1.0;  // S
    ThetaMode theta_mode = ThetaMode::resample_per_trial;
    NoiseKind noise_kind = NoiseKind::gaussian;
    std::uint64_t seed = 0;
    long record_every = 10;
    bool beta_literal = false;  // carried for confidence-radius consumers
    bool shared_noise = false;  // pair policies on common random numbers
    double delta = 0.1;         // used by the bound overlays
    int workers = 0;            // 0 = hardware default (capped by LINBANDIT_THREADS)

    void validate() const {
        if (d < 1) throw std::invalid_argument("config: dim must be >= 1");
        if (rounds < 1) throw std::invalid_argument("config: rounds must be >= 1");
        if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
        if (policies.empty()) throw std::invalid_argument("config: policies must be non-empty");
        if (sigma < 0.0) throw std::invalid_argument("config: sigma must be >= 0");
        if (!(kappa > 0.0)) throw std::invalid_argument("config: kappa must be > 0");
        if (!(theta_norm > 0.0)) throw std::invalid_argument("config: theta-norm must be > 0");
        if (record_every < 1) throw std::invalid_argument("config: record-every must be >= 1");
        if (!(delta > 0.0) || !(delta < 1.0)) {
            throw std::invalid_argument("config: delta must lie in (0, 1)");
        }
        if (workers < 0) throw std::invalid_argument("config: workers must be >= 0");
    }
};

struct CurvePoint {
    long round = 0;
    double mse_mean = 0.0;
    double mse_stderr = 0.0;
    double regret_mean = 0.0;
    double regret_stderr = 0.0;
    long n_trials = 0;
};

struct AggregatedCurve {
    std::string policy;
    std::vector<CurvePoint> points;
};

struct BoundsPoint {
    long round = 0;
    double mse_upper = 0.0;
    double mse_lower = 0.0;
    double tail_threshold = 0.0;
    double ofu_floor = 0.0;
    double ofu_regret_bound = 0.0;
};

// Rounds 1..d (the initialization batch), every record_every-th round, and T.
inline std::vector<long> recording_grid(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<long> grid;
    for (long r = 1; r <= std::min<long>(cfg.d, cfg.rounds); ++r) grid.push_back(r);
    for (long r = cfg.record_every; r <= cfg.rounds; r += cfg.record_every) grid.push_back(r);
    grid.push_back(cfg.rounds);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

// LINBANDIT_THREADS caps the worker count; absent means hardware default.
inline int resolve_workers(int requested) {
    int workers = requested > 0 ? requested
                                : std::max(1u, std::thread::hardware_concurrency());
    if (const char* cap_str = std::getenv("LINBANDIT_THREADS")) {
        const long cap = std::strtol(cap_str, nullptr, 10);
        if (cap >= 1) workers = std::min<long>(workers, cap);
    }
    return std::max(workers, 1);
}

namespace detail {

// Fixed-size chunks keep the floating-point summation order independent of
// how chunks are assigned to threads.
constexpr long kTrialChunk = 16;

struct TrialSums {
    // layout: [policy][grid][0..3] = sum mse, sum mse^2, sum regret, sum regret^2
    std::vector<double> acc;
    explicit TrialSums(std::size_t policies, std::size_t grid)
        : acc(policies * grid * 4, 0.0) {}
    double* at(std::size_t p, std::size_t g, std::size_t grid) {
        return acc.data() + (p * grid + g) * 4;
    }
};

inline void run_one_trial(const ExperimentConfig& cfg, long trial,
                          const std::vector<long>& grid, const Vector& theta_fixed,
                          TrialSums& sums) {
    Vector theta = theta_fixed;
    if (cfg.theta_mode == ThetaMode::resample_per_trial) {
        auto theta_rng = rng::substream(cfg.seed, static_cast<std::uint64_t>(trial), 0,
                                        rng::kPurposeTheta);
        theta = sample_theta(cfg.d, cfg.theta_norm, theta_rng);
    }
    const EnvironmentSpec env(theta, cfg.theta_norm,
                              NoiseModel{cfg.noise_kind, cfg.sigma});
    const SymMatrix w0 = cfg.kappa * SymMatrix::Identity(cfg.d, cfg.d);

    for (std::size_t ip = 0; ip < cfg.policies.size(); ++ip) {
        const std::uint64_t noise_stream = cfg.shared_noise ? 0 : ip + 1;
        auto noise_rng = rng::substream(cfg.seed, static_cast<std::uint64_t>(trial),
                                        noise_stream, rng::kPurposeNoise);
        auto action_rng = rng::substream(cfg.seed, static_cast<std::uint64_t>(trial),
                                         ip + 1, rng::kPurposeAction);
        const Trajectory traj =
            run_episode(cfg.policies[ip], env, cfg.rounds, w0, noise_rng, action_rng);

        double regret_acc = 0.0;
        std::size_t gi = 0;
        for (const auto& rec : traj.records) {
            regret_acc += instantaneous_regret(rec.action, theta);
            if (gi < grid.size() && rec.round == grid[gi]) {
                double* slot = sums.at(ip, gi, grid.size());
                const double mse = squared_error(rec.theta_hat, theta);
                slot[0] += mse;
                slot[1] += mse * mse;
                slot[2] += regret_acc;
                slot[3] += regret_acc * regret_acc;
                ++gi;
            }
        }
    }
}

}  // namespace detail

inline std::vector<AggregatedCurve> run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const std::vector<long> grid = recording_grid(cfg);
    const std::size_t n_policies = cfg.policies.size();
    const std::size_t n_grid = grid.size();

    Vector theta_fixed;
    if (cfg.theta_mode == ThetaMode::fixed) {
        auto gen = rng::substream(cfg.seed, 0, 0, rng::kPurposeTheta);
        theta_fixed = sample_theta(cfg.d, cfg.theta_norm, gen);
    }

    const long n_chunks = (cfg.trials + detail::kTrialChunk - 1) / detail::kTrialChunk;
    std::vector<detail::TrialSums> chunk_sums(
        static_cast<std::size_t>(n_chunks), detail::TrialSums(n_policies, n_grid));

    std::atomic<long> next_chunk{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const long c = next_chunk.fetch_add(1);
            if (c >= n_chunks) return;
            try {
                const long lo = c * detail::kTrialChunk;
                const long hi = std::min(lo + detail::kTrialChunk, cfg.trials);
                for (long trial = lo; trial < hi; ++trial) {
                    detail::run_one_trial(cfg, trial, grid, theta_fixed,
                                          chunk_sums[static_cast<std::size_t>(c)]);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    const int workers = std::min<long>(resolve_workers(cfg.workers), n_chunks);
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    // Reduce in chunk order; identical rounding no matter who computed what.
    detail::TrialSums totals(n_policies, n_grid);
    for (const auto& cs : chunk_sums) {
        for (std::size_t i = 0; i < totals.acc.size(); ++i) totals.acc[i] += cs.acc[i];
    }

    const double n = static_cast<double>(cfg.trials);
    std::vector<AggregatedCurve> curves;
    curves.reserve(n_policies);
    for (std::size_t ip = 0; ip < n_policies; ++ip) {
        AggregatedCurve curve;
        curve.policy = policy_name(cfg.policies[ip]);
        curve.points.reserve(n_grid);
        for (std::size_t g = 0; g < n_grid; ++g) {
            const double* slot = totals.at(ip, g, n_grid);
            auto stderr_of = [&](double s1, double s2) {
                if (cfg.trials < 2) return 0.0;
                const double var = std::max(s2 - s1 * s1 / n, 0.0) / (n - 1.0);
                return std::sqrt(var / n);
            };
            curve.points.push_back(CurvePoint{grid[g], slot[0] / n, stderr_of(slot[0], slot[1]),
                                              slot[2] / n, stderr_of(slot[2], slot[3]),
                                              cfg.trials});
        }
        curves.push_back(std::move(curve));
    }
    return curves;
}

// Least-squares slope of log(mse_mean) against log(round) over [t_min, t_max].
inline double fit_loglog_slope(const AggregatedCurve& curve, double t_min, double t_max) {
    std::vector<double> xs, ys;
    for (const auto& pt : curve.points) {
        if (pt.round < t_min || pt.round > t_max) continue;
        if (!(pt.mse_mean > 0.0)) {
            throw std::domain_error("fit_loglog_slope: mse_mean must be positive in range");
        }
        xs.push_back(std::log(static_cast<double>(pt.round)));
        ys.push_back(std::log(pt.mse_mean));
    }
    if (xs.size() < 5) {
        throw std::invalid_argument("fit_loglog_slope: need at least 5 grid points in range");
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) { mx += xs[i]; my += ys[i]; }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    return sxy / sxx;
}

// Bound overlays on the recording grid, with W0 = kappa*I and |theta*| = S.
inline std::vector<BoundsPoint> bound_curves(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<BoundsPoint> out;
    for (long round : recording_grid(cfg)) {
        BoundParams p;
        p.t = static_cast<double>(round);
        p.d = cfg.d;
        p.sigma = cfg.sigma;
        p.kappa = cfg.kappa;
        p.S = cfg.theta_norm;
        p.delta = cfg.delta;
        out.push_back(BoundsPoint{round, mse_upper_bound(p), mse_lower_bound(p),
                                  mse_tail_threshold(p),
                                  ofu_inconsistency_floor(cfg.sigma, cfg.delta),
                                  ofu_regret_bound(p, static_cast<double>(round))});
    }
    return out;
}

}  // namespace linbandit
