#pragma once

#include <netinfer/types.hpp>

#include <cmath>
#include <span>
#include <string>
#include <string_view>

namespace netinfer {

enum class KernelFamily { Linear, Rbf, Sigmoid, Polynomial };

std::string_view to_string(KernelFamily family);

/// Accepts "linear", "rbf"/"radial", "sigmoid", "poly"/"polynomial" (case-sensitive).
KernelFamily parse_kernel_family(std::string_view name);

/**
 * Kernel family plus its parameters.
 *
 *   Linear      <x,y>
 *   Polynomial  (kstar <x,y> + constant)^degree
 *   Rbf         exp(-kstar |x-y|^2)
 *   Sigmoid     tanh(kstar <x,y> + constant)
 *
 * Linear ignores kstar, degree and constant.
 */
struct KernelSpec {
    KernelFamily family = KernelFamily::Linear;
    double kstar = 1.0;
    int degree = 3;
    double constant = 0.0;

    static KernelSpec linear() { return {}; }
    static KernelSpec rbf(double kstar) { return {KernelFamily::Rbf, kstar, 3, 0.0}; }
    static KernelSpec sigmoid(double kstar, double constant = 0.0) {
        return {KernelFamily::Sigmoid, kstar, 3, constant};
    }
    static KernelSpec polynomial(double kstar, int degree, double constant = 1.0) {
        return {KernelFamily::Polynomial, kstar, degree, constant};
    }

    /// kstar = 1/p, degree 3, constant 1 (Polynomial) or 0 (Sigmoid).
    static KernelSpec defaults(KernelFamily family, std::size_t p);

    /// Kernel value depends on the squared distance rather than the inner product.
    bool uses_distance() const noexcept { return family == KernelFamily::Rbf; }

    /// Gram matrices are positive semidefinite, so the SVR dual is convex.
    bool is_psd() const noexcept {
        return family != KernelFamily::Sigmoid && !(family == KernelFamily::Polynomial && constant < 0.0);
    }

    /// Throws InvalidInput when kstar <= 0, degree outside 1..5 (Polynomial) or constant non-finite.
    void validate() const;

    friend bool operator==(const KernelSpec&, const KernelSpec&) = default;
};

/// Maps an accumulated inner product (or squared distance, for Rbf) to the kernel value.
inline double kernel_from_accumulated(const KernelSpec& spec, double acc) noexcept {
    switch (spec.family) {
    case KernelFamily::Linear:
        return acc;
    case KernelFamily::Rbf:
        return std::exp(-spec.kstar * acc);
    case KernelFamily::Sigmoid:
        return std::tanh(spec.kstar * acc + spec.constant);
    case KernelFamily::Polynomial: {
        const double base = spec.kstar * acc + spec.constant;
        double out = base;
        for (int d = 1; d < spec.degree; ++d) out *= base;
        return out;
    }
    }
    return acc;
}

double eval_kernel(const KernelSpec& spec, std::span<const double> x, std::span<const double> y);

/// G(i,j) = eval_kernel(spec, row i, row j). Symmetric by construction.
Matrix gram_matrix(const KernelSpec& spec, const Matrix& X);

/// K(i,j) = eval_kernel(spec, A row i, B row j).
Matrix cross_gram(const KernelSpec& spec, const Matrix& A, const Matrix& B);

/// Raw accumulators: pairwise inner products, or squared distances when `distances` is set.
Matrix pairwise_accumulators(const Matrix& X, bool distances);

/// Applies kernel_from_accumulated elementwise.
Matrix kernel_from_accumulators(const KernelSpec& spec, const Matrix& acc);

} // namespace netinfer
