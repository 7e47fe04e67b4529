// Stochastic linear bandit environment: hidden parameter theta*, centered
// sub-Gaussian noise with variance proxy sigma^2, rewards y = <x, theta*> + eta.
#pragma once

#include <cmath>
#include <random>
#include <stdexcept>

#include "linbandit/linalg.hpp"

namespace linbandit {

enum class NoiseKind { gaussian, bounded_uniform };

// Both kinds are centered with variance sigma^2; bounded_uniform is supported
// on [-sigma*sqrt(3), sigma*sqrt(3)] and exercises sub-Gaussianity beyond the
// Gaussian case.
struct NoiseModel {
    NoiseKind kind = NoiseKind::gaussian;
    double sigma = 1.0;

    double draw(std::mt19937_64& gen) const {
        if (sigma == 0.0) return 0.0;
        if (kind == NoiseKind::gaussian) {
            std::normal_distribution<double> dist(0.0, sigma);
            return dist(gen);
        }
        const double half = sigma * std::sqrt(3.0);
        std::uniform_real_distribution<double> dist(-half, half);
        return dist(gen);
    }
};

struct EnvironmentSpec {
    int d = 1;
    Vector theta_star;
    double S = 1.0;  // norm bound, |theta*|_2 <= S
    NoiseModel noise;

    EnvironmentSpec() = default;
    EnvironmentSpec(Vector theta, double norm_bound, NoiseModel noise_model)
        : d(static_cast<int>(theta.size())),
          theta_star(std::move(theta)),
          S(norm_bound),
          noise(noise_model) {
        if (d < 1) throw std::invalid_argument("EnvironmentSpec: d must be >= 1");
        if (!(S > 0.0)) throw std::invalid_argument("EnvironmentSpec: S must be > 0");
        if (noise.sigma < 0.0) throw std::invalid_argument("EnvironmentSpec: sigma must be >= 0");
        if (theta_star.norm() > S * (1.0 + 1e-9)) {
            throw std::invalid_argument("EnvironmentSpec: |theta*| exceeds S");
        }
    }
};

// theta* with |theta*|_2 = S exactly and direction uniform on the sphere.
inline Vector sample_theta(int d, double S, std::mt19937_64& gen) {
    if (d < 1) throw std::invalid_argument("sample_theta: d must be >= 1");
    if (!(S > 0.0)) throw std::invalid_argument("sample_theta: S must be > 0");
    std::normal_distribution<double> dist(0.0, 1.0);
    Vector g(d);
    double n = 0.0;
    do {
        for (int i = 0; i < d; ++i) g(i) = dist(gen);
        n = g.norm();
    } while (!(n > 1e-12));
    return (S / n) * g;
}

// One round of reward. Decisions must lie in the unit ball.
inline double reward(const Vector& x, const EnvironmentSpec& env, std::mt19937_64& gen) {
    detail::require_vector_dim(x, env.theta_star.size(), "reward");
    if (x.norm() > 1.0 + 1e-12) {
        throw std::domain_error("reward: decision lies outside the unit ball");
    }
    return x.dot(env.theta_star) + env.noise.draw(gen);
}

}  // namespace linbandit
