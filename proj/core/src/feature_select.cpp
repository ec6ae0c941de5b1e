#include <netinfer/feature_select.hpp>

#include <netinfer/error.hpp>

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace netinfer {

Vector importance_scores(const SvrModel& model) {
    const auto p = static_cast<std::size_t>(model.train_x.cols());
    FeatureSet all(p);
    std::iota(all.begin(), all.end(), std::size_t{0});
    const double full = weight_norm_sq(model, all);

    Vector scores(static_cast<Eigen::Index>(p));
    if (p == 1) {
        scores(0) = full;
        return scores;
    }
    FeatureSet rest;
    rest.reserve(p - 1);
    for (std::size_t j = 0; j < p; ++j) {
        rest.clear();
        for (std::size_t k = 0; k < p; ++k)
            if (k != j) rest.push_back(k);
        scores(static_cast<Eigen::Index>(j)) = full - weight_norm_sq(model, rest);
    }
    return scores;
}

Ranking rank_by_scores(const Vector& scores) {
    Ranking r;
    r.scores = scores;
    r.order.resize(static_cast<std::size_t>(scores.size()));
    std::iota(r.order.begin(), r.order.end(), std::size_t{0});
    std::stable_sort(r.order.begin(), r.order.end(), [&scores](std::size_t a, std::size_t b) {
        return scores(static_cast<Eigen::Index>(a)) > scores(static_cast<Eigen::Index>(b));
    });
    return r;
}

Ranking rank_features(const Matrix& X, const Vector& y, const KernelSpec& kernel, const SvrParams& params) {
    if (X.cols() < 1) throw InvalidInput("rank_features: no features");
    return rank_by_scores(importance_scores(fit_svr(X, y, kernel, params)));
}

Vector prefix_loocv_errors(const Matrix& X, const Vector& y, const Ranking& ranking, const KernelSpec& kernel,
                           const SvrParams& params, std::size_t max_prefix) {
    const Eigen::Index n = X.rows();
    const auto p = static_cast<std::size_t>(X.cols());
    if (n < 3) throw InvalidInput("prefix_loocv_errors: need at least three samples");
    if (y.size() != n) throw InvalidInput("prefix_loocv_errors: X and y row counts differ");
    if (ranking.order.size() != p) throw InvalidInput("prefix_loocv_errors: ranking does not cover every feature");
    kernel.validate();

    const std::size_t limit = max_prefix == 0 ? p : std::min(max_prefix, p);
    const bool distances = kernel.uses_distance();
    Vector errors = Vector::Constant(static_cast<Eigen::Index>(p), std::numeric_limits<double>::infinity());
    Matrix acc = Matrix::Zero(n, n);
    bool any_finite = false;

    for (std::size_t k = 0; k < limit; ++k) {
        const auto f = static_cast<Eigen::Index>(ranking.order[k]);
        for (Eigen::Index a = 0; a < n; ++a) {
            for (Eigen::Index b = a; b < n; ++b) {
                double c;
                if (distances) {
                    const double d = X(a, f) - X(b, f);
                    c = d * d;
                } else {
                    c = X(a, f) * X(b, f);
                }
                acc(a, b) += c;
                if (b != a) acc(b, a) = acc(a, b);
            }
        }
        const Matrix gram = kernel_from_accumulators(kernel, acc);
        try {
            errors(static_cast<Eigen::Index>(k)) = loocv_mse(gram, y, params, kernel.is_psd());
            any_finite = true;
        } catch (const ConvergenceError& e) {
            spdlog::warn("prefix {} LOOCV fold failed: {}", k + 1, e.what());
        }
    }
    if (!any_finite) throw ComputationError("prefix_loocv_errors: every prefix failed to fit");
    return errors;
}

std::size_t select_kopt(std::span<const double> loocv_errors) {
    if (loocv_errors.empty()) throw InvalidInput("select_kopt: empty error vector");
    std::size_t best = 0;
    for (std::size_t k = 0; k < loocv_errors.size(); ++k) {
        if (std::isnan(loocv_errors[k])) throw InvalidInput("select_kopt: NaN error");
        if (loocv_errors[k] < loocv_errors[best]) best = k;
    }
    return best + 1;
}

double intercept_only_loocv(const Vector& y) {
    const Eigen::Index n = y.size();
    if (n < 2) throw InvalidInput("intercept_only_loocv: need at least two samples");
    const double total = y.sum();
    double sse = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double e = y(i) - (total - y(i)) / static_cast<double>(n - 1);
        sse += e * e;
    }
    return sse / static_cast<double>(n);
}

} // namespace netinfer
