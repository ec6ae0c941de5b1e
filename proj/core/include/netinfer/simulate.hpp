#pragma once

#include <netinfer/timeseries.hpp>
#include <netinfer/types.hpp>

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

namespace netinfer {

enum class SimMode { Linear, Nonlinear, Mixture };

std::string_view to_string(SimMode mode);
SimMode parse_sim_mode(std::string_view name);

/**
 * Per-variable transition transforms.
 *   f1 sin x         f4 sin x
 *   f2 cos x         f5 x / 2
 *   f3 cbrt(x^2) - 2^(sin x)   f6 = f3
 *                    f7 -0.8 x
 * Nonlinear draws from {f1, f2, f3}, Mixture from {f4, f5, f6, f7}.
 */
enum class Transform { F1 = 1, F2, F3, F4, F5, F6, F7 };

double apply_transform(Transform f, double x);
std::string_view to_string(Transform f);

struct SimConfig {
    std::size_t p = 10;
    std::size_t n = 20;
    double pi = 0.05;
    std::uint64_t seed = 1;
    SimMode mode = SimMode::Linear;
    /// Magnitude bounds of nonzero coupling coefficients; signs are random.
    double coeff_min = 0.5;
    double coeff_max = 1.0;
    /// Bounds of the noise standard deviation, drawn once per series.
    double sigma_min = 0.1;
    double sigma_max = 0.5;
    /// Rescale A to spectral radius <= spectral_target; unset means on for Linear only.
    std::optional<bool> stabilize;
    double spectral_target = 0.9;

    bool stabilize_enabled() const { return stabilize.value_or(mode == SimMode::Linear); }
    void validate() const;
};

struct SimOutput {
    TimeSeries series;
    /// truth.edge(i, j) <=> A(j, i) != 0.
    Network truth;
    /// Coupling used for the rollout (after any stabilising rescale).
    Matrix A;
    /// Intercepts (Linear only, empty otherwise).
    Vector B;
    /// One tag per variable (Nonlinear / Mixture only).
    std::vector<Transform> transforms;
    double sigma = 0.0;
    /// Factor applied to A by stabilisation (1 when untouched).
    double stabilize_scale = 1.0;
};

/// floor(p^2 * pi), guarded against representation error just below an integer.
std::size_t true_edge_count(std::size_t p, double pi);

SimOutput simulate_linear(const SimConfig& cfg);
SimOutput simulate_nonlinear(const SimConfig& cfg);
SimOutput simulate_mixture(const SimConfig& cfg);
/// Dispatches on cfg.mode.
SimOutput simulate(const SimConfig& cfg);

/// X(1) ~ N(0, sigma^2); X(t+1) = A X(t) + B + noise.
Matrix rollout_linear(const Matrix& A, const Vector& B, double sigma, std::size_t n, std::mt19937_64& rng);

/// X(1) = 2 sin(N(0, sigma^2)); X(t) = A f(X(t-1)) + noise with f applied per variable.
Matrix rollout_transformed(const Matrix& A, const std::vector<Transform>& transforms, double sigma, std::size_t n,
                           std::mt19937_64& rng);

/// Deterministic 64-bit mix of a master seed with a list of stream coordinates.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> coords);

} // namespace netinfer
