#include <netinfer/lasso.hpp>

#include <netinfer/error.hpp>
#include <netinfer/parallel.hpp>

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace netinfer {

namespace {

double soft_threshold(double z, double gamma) {
    if (z > gamma) return z - gamma;
    if (z < -gamma) return z + gamma;
    return 0.0;
}

} // namespace

std::size_t LassoFit::nonzero_count() const {
    return static_cast<std::size_t>((coefficients.array() != 0.0).count());
}

double lambda_max(const Matrix& X, const Vector& y) {
    const auto m = static_cast<double>(y.size());
    const Vector yc = y.array() - y.mean();
    double best = 0.0;
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        const Vector xc = X.col(j).array() - X.col(j).mean();
        best = std::max(best, std::abs(2.0 * xc.dot(yc)) / m);
    }
    return best;
}

LassoFit fit_lasso(const Matrix& X, const Vector& y, double lambda, const LassoControl& control,
                   const Vector* warm_start) {
    if (X.rows() != y.size() || y.size() < 2) throw InvalidInput("fit_lasso: X and y row counts differ or too small");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InvalidInput("fit_lasso: lambda must be nonnegative");
    if (!X.allFinite() || !y.allFinite()) throw InvalidInput("fit_lasso: non-finite input");
    const Eigen::Index m = X.rows();
    const Eigen::Index p = X.cols();
    const auto md = static_cast<double>(m);

    const Vector xbar = X.colwise().mean().transpose();
    const double ybar = y.mean();
    const Matrix Xc = X.rowwise() - xbar.transpose();
    const Vector yc = y.array() - ybar;
    const Vector sq = Xc.colwise().squaredNorm().transpose();

    Vector beta = Vector::Zero(p);
    if (warm_start) {
        if (warm_start->size() != p) throw InvalidInput("fit_lasso: warm start has wrong length");
        beta = *warm_start;
    }
    Vector r = yc - Xc * beta;

    LassoFit out;
    out.lambda = lambda;
    double max_delta = 0.0;
    std::size_t sweep = 0;
    for (; sweep < control.max_sweeps; ++sweep) {
        max_delta = 0.0;
        for (Eigen::Index j = 0; j < p; ++j) {
            if (sq(j) == 0.0) {
                beta(j) = 0.0;
                continue;
            }
            const double rho = Xc.col(j).dot(r) + sq(j) * beta(j);
            const double updated = soft_threshold(2.0 * rho / md, lambda) / (2.0 * sq(j) / md);
            const double d = updated - beta(j);
            if (d != 0.0) {
                r.noalias() -= d * Xc.col(j);
                beta(j) = updated;
                max_delta = std::max(max_delta, std::abs(d));
            }
        }
        if (max_delta < control.tol) break;
    }
    if (sweep == control.max_sweeps)
        throw ConvergenceError("lasso coordinate descent did not converge (last change " + std::to_string(max_delta) +
                                   ")",
                               max_delta, sweep);
    out.sweeps = sweep + 1;
    out.coefficients = std::move(beta);
    out.intercept = ybar - xbar.dot(out.coefficients);
    return out;
}

double lasso_bic(double rss, std::size_t m, std::size_t df) {
    const auto md = static_cast<double>(m);
    return md * std::log(std::max(rss / md, 1e-12)) + static_cast<double>(df) * std::log(md);
}

std::vector<double> lambda_path(double lmax, std::size_t length, double min_ratio) {
    std::vector<double> out;
    if (length == 0) return out;
    if (length == 1 || lmax <= 0.0) {
        out.assign(length == 1 ? 1 : length, lmax);
        return out;
    }
    out.reserve(length);
    const double step = std::log(min_ratio) / static_cast<double>(length - 1);
    for (std::size_t k = 0; k < length; ++k) out.push_back(lmax * std::exp(step * static_cast<double>(k)));
    return out;
}

LassoFit select_lasso_by_bic(const Matrix& X, const Vector& y, const NlassoOptions& options) {
    const auto m = static_cast<std::size_t>(X.rows());
    const double lmax = lambda_max(X, y);
    const std::size_t df_cap = m > options.max_df_margin ? m - options.max_df_margin : 0;

    std::optional<LassoFit> best;
    double best_bic = std::numeric_limits<double>::infinity();
    std::optional<Vector> warm;
    for (double lambda : lambda_path(lmax, options.path_length, options.min_ratio)) {
        LassoFit fit;
        try {
            fit = fit_lasso(X, y, lambda, options.control, warm ? &*warm : nullptr);
        } catch (const ConvergenceError& e) {
            spdlog::warn("nlasso: lambda {} skipped: {}", lambda, e.what());
            continue;
        }
        warm = fit.coefficients;
        const std::size_t df = fit.nonzero_count();
        if (df > df_cap) break;
        const double rss = (y.array() - fit.intercept - (X * fit.coefficients).array()).matrix().squaredNorm();
        const double bic = lasso_bic(rss, m, df);
        if (!best || bic < best_bic) {
            best = std::move(fit);
            best_bic = bic;
        }
        if (lmax == 0.0) break;
    }
    if (!best) throw ComputationError("nlasso: no point on the lambda path could be fitted");
    return *best;
}

Network infer_nlasso(const TimeSeries& ts, const NlassoOptions& options) {
    const LaggedPairs pairs = build_lagged_pairs(ts);
    const std::size_t p = ts.p();
    std::vector<std::optional<std::vector<std::size_t>>> parents(p);

    parallel_for(p, options.threads, [&](std::size_t j) {
        std::vector<std::size_t> cols;
        for (std::size_t i = 0; i < p; ++i)
            if (!(options.exclude_self && i == j)) cols.push_back(i);
        if (cols.empty()) {
            parents[j] = std::vector<std::size_t>{};
            return;
        }
        Matrix X(pairs.X.rows(), static_cast<Eigen::Index>(cols.size()));
        for (std::size_t c = 0; c < cols.size(); ++c)
            X.col(static_cast<Eigen::Index>(c)) = pairs.X.col(static_cast<Eigen::Index>(cols[c]));
        try {
            const LassoFit fit = select_lasso_by_bic(X, pairs.Y.col(static_cast<Eigen::Index>(j)), options);
            std::vector<std::size_t> sel;
            for (std::size_t c = 0; c < cols.size(); ++c)
                if (fit.coefficients(static_cast<Eigen::Index>(c)) != 0.0) sel.push_back(cols[c]);
            parents[j] = std::move(sel);
        } catch (const Error& e) {
            spdlog::warn("nlasso: response {} failed, leaving it without parents: {}", j + 1, e.what());
        }
    });

    Network net(p);
    std::size_t failures = 0;
    for (std::size_t j = 0; j < p; ++j) {
        if (!parents[j]) {
            ++failures;
            continue;
        }
        for (std::size_t i : *parents[j]) net.set_edge(i, j);
    }
    if (failures == p) throw ComputationError("infer_nlasso: every response failed");
    return net;
}

} // namespace netinfer
