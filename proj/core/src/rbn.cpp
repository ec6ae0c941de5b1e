#include <netinfer/rbn.hpp>

#include <netinfer/error.hpp>
#include <netinfer/parallel.hpp>

#include <spdlog/spdlog.h>

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace netinfer {

namespace {

constexpr double kVarianceFloor = 1e-12;

struct OlsFit {
    Vector coef;  // intercept first
    double rss;
};

OlsFit ols_with_intercept(const Vector& y, const Matrix& X_parents) {
    const Eigen::Index m = y.size();
    const Eigen::Index q = X_parents.cols();
    Matrix design(m, q + 1);
    design.col(0).setOnes();
    if (q > 0) design.rightCols(q) = X_parents;

    Eigen::ColPivHouseholderQR<Matrix> qr(design);
    qr.setThreshold(1e-10);
    if (qr.rank() < q + 1) throw DegenerateDesign("OLS design is rank deficient");
    OlsFit fit;
    fit.coef = qr.solve(y);
    fit.rss = (y - design * fit.coef).squaredNorm();
    return fit;
}

Matrix select_columns(const Matrix& X, const std::vector<std::size_t>& cols) {
    Matrix out(X.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) out.col(static_cast<Eigen::Index>(c)) = X.col(static_cast<Eigen::Index>(cols[c]));
    return out;
}

LocalBic score_from_rss(double rss, Eigen::Index m, Eigen::Index q, int extra) {
    LocalBic out;
    const auto md = static_cast<double>(m);
    double var = rss / md;
    if (var < kVarianceFloor) {
        var = kVarianceFloor;
        out.variance_clamped = true;
    }
    const double loglik = -0.5 * md * std::log(2.0 * std::numbers::pi * var) - rss / (2.0 * var);
    const double L = static_cast<double>(q + 2 + extra);
    out.score = loglik - 0.5 * L * std::log(md);
    return out;
}

std::optional<double> try_score(const Matrix& X, const Vector& y, const std::vector<std::size_t>& parents) {
    try {
        return bic_local(y, select_columns(X, parents)).score;
    } catch (const DegenerateDesign&) {
        return std::nullopt;
    }
}

} // namespace

LocalBic bic_local(const Vector& y, const Matrix& X_parents, int extra_params) {
    const Eigen::Index m = y.size();
    const Eigen::Index q = X_parents.cols();
    if (X_parents.rows() != m) throw InvalidInput("bic_local: parent rows differ from target length");
    if (m < q + 2) throw InvalidInput("bic_local: need m >= q + 2 observations");
    if (!y.allFinite() || !X_parents.allFinite()) throw InvalidInput("bic_local: non-finite input");
    const OlsFit fit = ols_with_intercept(y, X_parents);
    return score_from_rss(fit.rss, m, q, extra_params);
}

LocalModel fit_local_model(const Matrix& X, const Vector& y, std::size_t target, std::vector<std::size_t> parents) {
    std::sort(parents.begin(), parents.end());
    const Matrix Xp = select_columns(X, parents);
    const OlsFit fit = ols_with_intercept(y, Xp);
    LocalModel model;
    model.target = target;
    model.parents = std::move(parents);
    model.intercept = fit.coef(0);
    model.coefficients = fit.coef.tail(fit.coef.size() - 1);
    model.noise_variance = std::max(fit.rss / static_cast<double>(y.size()), kVarianceFloor);
    model.bic = score_from_rss(fit.rss, y.size(), Xp.cols(), 0).score;
    return model;
}

LocalModel learn_parents(const Matrix& X, const Vector& y, std::size_t target, std::vector<GreedyMove>* moves) {
    const auto m = static_cast<std::size_t>(X.rows());
    const auto p = static_cast<std::size_t>(X.cols());
    if (m < 4) throw InvalidInput("learn_parents: need at least 4 transitions");
    const std::size_t cap = std::min(p, m - 3);

    std::vector<std::size_t> parents;
    std::vector<bool> in_set(p, false);
    double current = bic_local(y, Matrix(static_cast<Eigen::Index>(m), 0)).score;

    for (;;) {
        std::optional<GreedyMove> best;
        auto consider = [&](GreedyMove::Kind kind, std::size_t v, double score) {
            if (!(score > current)) return;
            if (!best || score > best->score_after ||
                (score == best->score_after && kind == GreedyMove::Kind::Remove && best->kind == GreedyMove::Kind::Add)) {
                best = GreedyMove{kind, v, current, score};
            }
        };

        for (std::size_t r = 0; r < parents.size(); ++r) {
            std::vector<std::size_t> trial = parents;
            trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(r));
            if (auto s = try_score(X, y, trial)) consider(GreedyMove::Kind::Remove, parents[r], *s);
        }
        if (parents.size() < cap) {
            for (std::size_t v = 0; v < p; ++v) {
                if (in_set[v]) continue;
                std::vector<std::size_t> trial = parents;
                trial.push_back(v);
                if (auto s = try_score(X, y, trial)) consider(GreedyMove::Kind::Add, v, *s);
            }
        }
        if (!best) break;

        if (best->kind == GreedyMove::Kind::Add) {
            parents.push_back(best->variable);
            in_set[best->variable] = true;
        } else {
            parents.erase(std::find(parents.begin(), parents.end(), best->variable));
            in_set[best->variable] = false;
        }
        current = best->score_after;
        if (moves) moves->push_back(*best);
    }
    return fit_local_model(X, y, target, parents);
}

Network learn_rbn(const TimeSeries& ts, const RbnOptions& options) {
    // m = n - 1 transitions and the parent cap m - 3 must allow at least one parent.
    if (ts.n() < 5) throw InvalidInput("learn_rbn: need at least 5 timepoints");
    const LaggedPairs pairs = build_lagged_pairs(ts);
    const std::size_t p = ts.p();
    std::vector<std::optional<LocalModel>> locals(p);
    parallel_for(p, options.threads, [&](std::size_t j) {
        try {
            locals[j] = learn_parents(pairs.X, pairs.Y.col(static_cast<Eigen::Index>(j)), j);
        } catch (const Error& e) {
            spdlog::warn("rbn: target {} failed, leaving it without parents: {}", j + 1, e.what());
        }
    });
    Network net(p);
    std::size_t failures = 0;
    for (std::size_t j = 0; j < p; ++j) {
        if (!locals[j]) {
            ++failures;
            continue;
        }
        for (std::size_t i : locals[j]->parents) net.set_edge(i, j);
    }
    if (failures == p) throw ComputationError("learn_rbn: every target failed");
    return net;
}

} // namespace netinfer
