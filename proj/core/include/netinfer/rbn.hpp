#pragma once

#include <netinfer/timeseries.hpp>
#include <netinfer/types.hpp>

#include <cstddef>
#include <vector>

namespace netinfer {

/// Linear-Gaussian conditional of X_target(t+1) given its parents in X(t).
struct LocalModel {
    std::size_t target = 0;
    std::vector<std::size_t> parents;
    Vector coefficients;
    double intercept = 0.0;
    double noise_variance = 1.0;
    double bic = 0.0;
};

struct LocalBic {
    double score = 0.0;
    /// Residual variance fell below 1e-12 and was clamped.
    bool variance_clamped = false;
};

/**
 * Gaussian BIC of an OLS fit of y on X_parents plus intercept:
 *   log-likelihood at the MLE - (L/2) log m,  L = q + 2 + extra_params.
 *
 * Requires m >= q + 2 and a full-rank design (DegenerateDesign otherwise).
 */
LocalBic bic_local(const Vector& y, const Matrix& X_parents, int extra_params = 0);

/// Fits the OLS conditional for the given parent set; fills coefficients, intercept, variance and BIC.
LocalModel fit_local_model(const Matrix& X, const Vector& y, std::size_t target, std::vector<std::size_t> parents);

struct GreedyMove {
    enum class Kind { Add, Remove };
    Kind kind;
    std::size_t variable;
    double score_before;
    double score_after;
};

/**
 * Hill climbing over the parent set of one target: start empty, apply the best
 * strictly improving single addition or removal until none improves or the set
 * reaches min(p, m - 3). Equal gains prefer removal, then the lower index.
 */
LocalModel learn_parents(const Matrix& X, const Vector& y, std::size_t target,
                         std::vector<GreedyMove>* moves = nullptr);

struct RbnOptions {
    std::size_t threads = 1;
};

/**
 * Restricted dynamic Bayesian network: arcs only run X_i(t) -> X_j(t+1), so
 * the structure search decomposes into one independent search per target and
 * acyclicity holds by construction.
 */
Network learn_rbn(const TimeSeries& ts, const RbnOptions& options = {});

} // namespace netinfer
