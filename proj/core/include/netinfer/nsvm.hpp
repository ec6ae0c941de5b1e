#pragma once

#include <netinfer/feature_select.hpp>
#include <netinfer/kernels.hpp>
#include <netinfer/svr.hpp>
#include <netinfer/timeseries.hpp>

#include <cstddef>
#include <optional>
#include <vector>

namespace netinfer {

struct TuningGrid {
    std::vector<double> kstar_values;
    std::vector<double> C_values;
    /// Only consulted for the polynomial family.
    std::vector<int> degrees;

    /// kstar in {1e-6, ..., 1e-1}, C in {1e1, ..., 1e6}, degree in {1, ..., 5}.
    static TuningGrid defaults();
    void validate() const;
};

struct TunedHyperparameters {
    KernelSpec kernel;
    double C = 1.0;
    double loocv_mse = 0.0;
    bool is_default = true;
    /// Grid points whose LOOCV failed to converge.
    std::size_t failed_points = 0;
};

/**
 * Leave-one-out search over `grid` plus the default point (`default_kernel`, `default_C`).
 * Linear kernels only vary C. Ties prefer the default, then smaller C, then smaller
 * kstar, then smaller degree. Throws ComputationError if no point could be evaluated.
 */
TunedHyperparameters tune_hyperparameters(const Matrix& X, const Vector& y, const KernelSpec& default_kernel,
                                          double default_C, const TuningGrid& grid, const SvrParams& params);

struct NsvmOptions {
    KernelFamily family = KernelFamily::Linear;
    /// Overrides KernelSpec::defaults for the default point (constants, degree, kstar).
    std::optional<KernelSpec> kernel;
    bool tune = true;
    TuningGrid grid = TuningGrid::defaults();
    /// params.C is the default regularisation constant.
    SvrParams params;
    /// Largest prefix fitted by the LOOCV sweep; 0 means every feature.
    std::size_t max_prefix = 0;
    /// Empty the neighbourhood when no prefix beats the intercept-only LOOCV error.
    bool empty_guard = true;
    std::size_t threads = 1;

    KernelSpec default_kernel(std::size_t p) const;
};

struct ColumnResult {
    std::size_t target = 0;
    /// Selected predictors, 0-based, in ranking order.
    std::vector<std::size_t> parents;
    KernelSpec kernel;
    double C = 1.0;
    SelectionResult selection;
    double intercept_only_error = 0.0;
    bool emptied_by_guard = false;
};

/// One response of the neighbourhood SVM: tune, rank, sweep prefixes, select.
ColumnResult infer_nsvm_column(const LaggedPairs& pairs, std::size_t target, const NsvmOptions& options);

/**
 * Neighbourhood SVM network: one regression of X_j(t+1) on X(t) per variable j.
 * Responses that fail are left empty with a warning; ComputationError if all fail.
 */
Network infer_nsvm(const TimeSeries& ts, const NsvmOptions& options);

} // namespace netinfer
