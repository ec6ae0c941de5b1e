#pragma once

#include <netinfer/kernels.hpp>
#include <netinfer/svr.hpp>
#include <netinfer/types.hpp>

#include <cstddef>
#include <span>
#include <vector>

namespace netinfer {

/// Features in descending order of importance; ties go to the lower index.
struct Ranking {
    std::vector<std::size_t> order;
    Vector scores;
};

struct SelectionResult {
    /// Number of top-ranked features kept, 1-based.
    std::size_t kopt = 1;
    Vector loocv_errors;
    Ranking ranking;
};

/// score_j = |w|^2 - |w^(-j)|^2 with the dual coefficients held fixed.
Vector importance_scores(const SvrModel& model);

Ranking rank_by_scores(const Vector& scores);

/// Fits one SVR on every feature and ranks features by importance_scores.
Ranking rank_features(const Matrix& X, const Vector& y, const KernelSpec& kernel, const SvrParams& params);

/**
 * Entry k-1 is the leave-one-out MSE of an SVR restricted to the top-k ranked
 * features. A prefix with any failed fold is reported as +inf. Prefixes beyond
 * `max_prefix` (when nonzero) are not fitted and are also +inf.
 *
 * Throws ComputationError when every prefix failed.
 */
Vector prefix_loocv_errors(const Matrix& X, const Vector& y, const Ranking& ranking, const KernelSpec& kernel,
                           const SvrParams& params, std::size_t max_prefix = 0);

/// Smallest 1-based k attaining the minimum.
std::size_t select_kopt(std::span<const double> loocv_errors);

/// Leave-one-out MSE of predicting each held-out sample by the mean of the others.
double intercept_only_loocv(const Vector& y);

} // namespace netinfer
