#pragma once

#include <netinfer/kernels.hpp>
#include <netinfer/types.hpp>

#include <cstddef>
#include <span>

namespace netinfer {

struct SvrParams {
    double C = 1.0;
    double epsilon = 0.1;
    /// Stop once the maximal KKT violation (gradient units) drops below tol.
    double tol = 1e-3;
    /// Pair-update budget; 0 selects 10 * n * 1000.
    std::size_t max_passes = 0;

    void validate() const;
    std::size_t update_budget(std::size_t n) const noexcept {
        return max_passes != 0 ? max_passes : 10 * n * 1000;
    }
};

/// Signed dual coefficients (beta_i = alpha_i - alpha_i*) and bias of a solved dual.
struct DualSolution {
    Vector beta;
    double bias = 0.0;
    std::size_t iterations = 0;
    double violation = 0.0;
};

/**
 * Solves the epsilon-SVR dual on a precomputed Gram matrix by sequential minimal
 * optimisation over the 2n box-constrained multipliers.
 *
 * The first working index is the maximal KKT violator; the second maximises the
 * second-order decrease among violating partners. Non-positive curvature (indefinite
 * sigmoid Gram matrices) is replaced by 1e-12 so every update is finite.
 *
 * Throws ConvergenceError carrying the final violation when the update budget runs out.
 */
DualSolution solve_svr_dual(const Matrix& gram, const Vector& y, const SvrParams& params);

struct SvrModel {
    Vector beta;
    double bias = 0.0;
    KernelSpec kernel;
    Matrix train_x;
    SvrParams params;
    std::size_t iterations = 0;
    double kkt_violation = 0.0;

    std::size_t support_vector_count() const;
};

/**
 * Fits an epsilon-SVR. Inputs are used as given: callers standardise X and y
 * (zero mean, unit variance) beforehand.
 */
SvrModel fit_svr(const Matrix& X, const Vector& y, const KernelSpec& kernel, const SvrParams& params);

double predict(const SvrModel& model, std::span<const double> x);
Vector predict(const SvrModel& model, const Matrix& X);

/// sum_ij beta_i beta_j K(x_i|S, x_j|S) with beta frozen; equals |w|^2 when S is every feature.
double weight_norm_sq(const SvrModel& model, const FeatureSet& active_features);

/// 0.5 beta'K beta - y'beta + epsilon |beta|_1 (minimisation form of the dual).
double svr_dual_objective(const Matrix& gram, const Vector& y, const Vector& beta, double epsilon);

/// 0.5 beta'K beta + C sum max(0, |y - f| - epsilon), the primal objective at w = sum beta_i phi(x_i).
double svr_primal_objective(const Matrix& gram, const Vector& y, const Vector& beta, double bias,
                            double C, double epsilon);

/// Largest violation of the residual-form KKT conditions of a solved dual.
double svr_kkt_violation(const Matrix& gram, const Vector& y, const DualSolution& sol, const SvrParams& params);

/// Leave-one-out mean squared error using the rows/columns of a full Gram matrix.
/// Throws ConvergenceError if any fold fails. `warm_start` seeds each fold from the
/// full-data solution; only use it for positive semidefinite Gram matrices, where the
/// fold optimum is unique.
double loocv_mse(const Matrix& gram, const Vector& y, const SvrParams& params, bool warm_start = false);

} // namespace netinfer
