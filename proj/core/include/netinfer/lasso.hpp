#pragma once

#include <netinfer/timeseries.hpp>
#include <netinfer/types.hpp>

#include <cstddef>
#include <vector>

namespace netinfer {

struct LassoFit {
    Vector coefficients;
    double intercept = 0.0;
    double lambda = 0.0;
    std::size_t sweeps = 0;

    std::size_t nonzero_count() const;
};

struct LassoControl {
    /// Stop once the largest coefficient change in a sweep is below this.
    double tol = 1e-7;
    std::size_t max_sweeps = 10000;
};

/**
 * Cyclic coordinate descent on (1/m)|y - b - X beta|^2 + lambda |beta|_1.
 * Columns of X are expected standardised; the intercept is recovered from the
 * column means after the fit. `warm_start`, when given, seeds beta.
 * Throws ConvergenceError with the final change if the sweep budget runs out.
 */
LassoFit fit_lasso(const Matrix& X, const Vector& y, double lambda, const LassoControl& control = {},
                   const Vector* warm_start = nullptr);

/// Smallest lambda with an all-zero solution: max_j |2 x_j' (y - ybar)| / m.
double lambda_max(const Matrix& X, const Vector& y);

/// Gaussian BIC used for path selection: m log(RSS/m) + df log m (lower is better).
double lasso_bic(double rss, std::size_t m, std::size_t df);

struct NlassoOptions {
    std::size_t path_length = 50;
    /// Smallest lambda on the path relative to lambda_max.
    double min_ratio = 1e-3;
    /// Forbid the X_j(t) -> X_j(t+1) regressor.
    bool exclude_self = false;
    /// Path points with more nonzeros than m - max_df_margin are not eligible for selection.
    std::size_t max_df_margin = 3;
    LassoControl control;
    std::size_t threads = 1;
};

/// Log-spaced path from lambda_max down to min_ratio * lambda_max (path_length points).
std::vector<double> lambda_path(double lmax, std::size_t length, double min_ratio);

/// Lasso path for one response; returns the BIC-selected fit.
LassoFit select_lasso_by_bic(const Matrix& X, const Vector& y, const NlassoOptions& options);

/// Neighbourhood lasso: nonzero coefficients of each response's BIC-selected fit become edges.
Network infer_nlasso(const TimeSeries& ts, const NlassoOptions& options = {});

} // namespace netinfer
