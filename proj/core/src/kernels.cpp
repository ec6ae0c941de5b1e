#include <netinfer/kernels.hpp>

#include <netinfer/error.hpp>

#include <algorithm>
#include <string>

namespace netinfer {

namespace {

template <class RowA, class RowB>
double accumulate_pair(const RowA& a, const RowB& b, Eigen::Index len, bool distances) {
    double acc = 0.0;
    if (distances) {
        for (Eigen::Index k = 0; k < len; ++k) {
            const double d = a(k) - b(k);
            acc += d * d;
        }
    } else {
        for (Eigen::Index k = 0; k < len; ++k) acc += a(k) * b(k);
    }
    return acc;
}

void require_finite(const Matrix& X, const char* what) {
    if (!X.allFinite()) throw InvalidInput(std::string(what) + ": non-finite entry");
}

} // namespace

std::string_view to_string(KernelFamily family) {
    switch (family) {
    case KernelFamily::Linear: return "linear";
    case KernelFamily::Rbf: return "rbf";
    case KernelFamily::Sigmoid: return "sigmoid";
    case KernelFamily::Polynomial: return "poly";
    }
    return "linear";
}

KernelFamily parse_kernel_family(std::string_view name) {
    if (name == "linear") return KernelFamily::Linear;
    if (name == "rbf" || name == "radial") return KernelFamily::Rbf;
    if (name == "sigmoid") return KernelFamily::Sigmoid;
    if (name == "poly" || name == "polynomial") return KernelFamily::Polynomial;
    throw InvalidInput("unknown kernel family '" + std::string(name) + "'");
}

KernelSpec KernelSpec::defaults(KernelFamily family, std::size_t p) {
    if (p == 0) throw InvalidInput("KernelSpec::defaults: p must be positive");
    const double kstar = 1.0 / static_cast<double>(p);
    switch (family) {
    case KernelFamily::Linear: return linear();
    case KernelFamily::Rbf: return rbf(kstar);
    case KernelFamily::Sigmoid: return sigmoid(kstar, 0.0);
    case KernelFamily::Polynomial: return polynomial(kstar, 3, 1.0);
    }
    return linear();
}

void KernelSpec::validate() const {
    if (family == KernelFamily::Linear) return;
    if (!(kstar > 0.0) || !std::isfinite(kstar))
        throw InvalidInput("kernel parameter kstar must be positive and finite");
    if (!std::isfinite(constant)) throw InvalidInput("kernel constant must be finite");
    if (family == KernelFamily::Polynomial && (degree < 1 || degree > 5))
        throw InvalidInput("polynomial degree must lie in 1..5");
}

double eval_kernel(const KernelSpec& spec, std::span<const double> x, std::span<const double> y) {
    spec.validate();
    if (x.size() != y.size() || x.empty())
        throw InvalidInput("eval_kernel: vectors must have equal, nonzero length");
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (!std::isfinite(x[k]) || !std::isfinite(y[k]))
            throw InvalidInput("eval_kernel: non-finite entry");
    }
    const Eigen::Map<const Vector> a(x.data(), static_cast<Eigen::Index>(x.size()));
    const Eigen::Map<const Vector> b(y.data(), static_cast<Eigen::Index>(y.size()));
    return kernel_from_accumulated(spec, accumulate_pair(a, b, a.size(), spec.uses_distance()));
}

Matrix pairwise_accumulators(const Matrix& X, bool distances) {
    const Eigen::Index n = X.rows();
    Matrix acc(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            const double v = accumulate_pair(X.row(i), X.row(j), X.cols(), distances);
            acc(i, j) = v;
            acc(j, i) = v;
        }
    }
    return acc;
}

Matrix kernel_from_accumulators(const KernelSpec& spec, const Matrix& acc) {
    return acc.unaryExpr([&spec](double v) { return kernel_from_accumulated(spec, v); });
}

Matrix gram_matrix(const KernelSpec& spec, const Matrix& X) {
    spec.validate();
    if (X.rows() < 1 || X.cols() < 1) throw InvalidInput("gram_matrix: empty input");
    require_finite(X, "gram_matrix");
    return kernel_from_accumulators(spec, pairwise_accumulators(X, spec.uses_distance()));
}

Matrix cross_gram(const KernelSpec& spec, const Matrix& A, const Matrix& B) {
    spec.validate();
    if (A.cols() != B.cols() || A.cols() < 1)
        throw InvalidInput("cross_gram: column counts differ or are zero");
    require_finite(A, "cross_gram");
    require_finite(B, "cross_gram");
    Matrix K(A.rows(), B.rows());
    const bool distances = spec.uses_distance();
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < B.rows(); ++j)
            K(i, j) = kernel_from_accumulated(spec, accumulate_pair(A.row(i), B.row(j), A.cols(), distances));
    return K;
}

} // namespace netinfer
