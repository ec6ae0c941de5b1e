#include <netinfer/svr.hpp>

#include <netinfer/error.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace netinfer {

namespace {

constexpr double kTau = 1e-12;

/// Working state of the 2n-variable dual. Index t < n is alpha_t (sign +1),
/// t >= n is alpha*_{t-n} (sign -1).
class SmoSolver {
public:
    // `start`, when given, is a feasible signed coefficient vector (sum zero, |beta| <= C).
    SmoSolver(const Matrix& K, const Vector& y, const SvrParams& params, const Vector* start = nullptr)
        : K_(K), n_(static_cast<std::size_t>(y.size())), C_(params.C),
          alpha_(2 * n_, 0.0), grad_(2 * n_), diag_(n_) {
        for (std::size_t k = 0; k < n_; ++k) diag_[k] = K(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
        Vector Kb = Vector::Zero(static_cast<Eigen::Index>(n_));
        if (start) {
            for (std::size_t t = 0; t < n_; ++t) {
                const double b = (*start)(static_cast<Eigen::Index>(t));
                alpha_[t] = std::max(b, 0.0);
                alpha_[t + n_] = std::max(-b, 0.0);
            }
            Kb = K * *start;
        }
        for (std::size_t t = 0; t < n_; ++t) {
            const auto e = static_cast<Eigen::Index>(t);
            grad_[t] = params.epsilon - y(e) + Kb(e);
            grad_[t + n_] = params.epsilon + y(e) - Kb(e);
        }
    }

    DualSolution run(double tol, std::size_t budget) {
        std::size_t iter = 0;
        double violation = 0.0;
        for (;;) {
            std::size_t i = 0, j = 0;
            violation = select_pair(i, j);
            if (violation < tol) break;
            if (iter >= budget) {
                throw ConvergenceError("SVR dual did not converge: KKT violation " + std::to_string(violation) +
                                           " after " + std::to_string(iter) + " pair updates",
                                       violation, iter);
            }
            update_pair(i, j);
            ++iter;
        }

        DualSolution out;
        out.beta.resize(static_cast<Eigen::Index>(n_));
        for (std::size_t k = 0; k < n_; ++k) out.beta(static_cast<Eigen::Index>(k)) = alpha_[k] - alpha_[k + n_];
        out.bias = -compute_rho();
        out.iterations = iter;
        out.violation = violation;
        return out;
    }

private:
    double sign(std::size_t t) const noexcept { return t < n_ ? 1.0 : -1.0; }
    Eigen::Index point(std::size_t t) const noexcept { return static_cast<Eigen::Index>(t < n_ ? t : t - n_); }
    double kern(std::size_t a, std::size_t b) const noexcept { return K_(point(a), point(b)); }


    // Returns the maximal violation m(alpha) - M(alpha); sets the working pair.
    double select_pair(std::size_t& i_out, std::size_t& j_out) const {
        const std::size_t l = 2 * n_;
        double gmax = -std::numeric_limits<double>::infinity();
        std::size_t i = l;
        for (std::size_t t = 0; t < n_; ++t) {
            // alpha_t carries sign +1, alpha*_t sign -1.
            if (alpha_[t] < C_ && -grad_[t] > gmax) {
                gmax = -grad_[t];
                i = t;
            }
            if (alpha_[t + n_] > 0.0 && grad_[t + n_] > gmax) {
                gmax = grad_[t + n_];
                i = t + n_;
            }
        }
        if (i == l) return 0.0;

        double gmin = std::numeric_limits<double>::infinity();
        double best_obj = std::numeric_limits<double>::infinity();
        std::size_t j = l;
        const Eigen::Index pi = point(i);
        const double kii = diag_[static_cast<std::size_t>(pi)];
        const double* ki = K_.col(pi).data();
        auto consider = [&](std::size_t t, std::size_t k, double v) {
            gmin = std::min(gmin, v);
            const double b = gmax - v;
            if (b > 0.0) {
                double a = kii + diag_[k] - 2.0 * ki[k];
                if (a <= 0.0) a = kTau;
                const double obj = -(b * b) / a;
                if (obj < best_obj) {
                    best_obj = obj;
                    j = t;
                }
            }
        };
        for (std::size_t k = 0; k < n_; ++k) {
            if (alpha_[k] > 0.0) consider(k, k, -grad_[k]);
            if (alpha_[k + n_] < C_) consider(k + n_, k, grad_[k + n_]);
        }
        if (j == l) return 0.0;
        i_out = i;
        j_out = j;
        return gmax - gmin;
    }

    void update_pair(std::size_t i, std::size_t j) {
        const double si = sign(i), sj = sign(j);
        const double qij = si * sj * kern(i, j);
        const double old_i = alpha_[i], old_j = alpha_[j];
        double& ai = alpha_[i];
        double& aj = alpha_[j];

        if (si != sj) {
            double quad = kern(i, i) + kern(j, j) + 2.0 * qij;
            if (quad <= 0.0) quad = kTau;
            const double delta = (-grad_[i] - grad_[j]) / quad;
            const double diff = ai - aj;
            ai += delta;
            aj += delta;
            if (diff > 0.0) {
                if (aj < 0.0) { aj = 0.0; ai = diff; }
            } else {
                if (ai < 0.0) { ai = 0.0; aj = -diff; }
            }
            if (diff > 0.0) {
                if (ai > C_) { ai = C_; aj = C_ - diff; }
            } else {
                if (aj > C_) { aj = C_; ai = C_ + diff; }
            }
        } else {
            double quad = kern(i, i) + kern(j, j) - 2.0 * qij;
            if (quad <= 0.0) quad = kTau;
            const double delta = (grad_[i] - grad_[j]) / quad;
            const double sum = ai + aj;
            ai -= delta;
            aj += delta;
            if (sum > C_) {
                if (ai > C_) { ai = C_; aj = sum - C_; }
            } else {
                if (aj < 0.0) { aj = 0.0; ai = sum; }
            }
            if (sum > C_) {
                if (aj > C_) { aj = C_; ai = sum - C_; }
            } else {
                if (ai < 0.0) { ai = 0.0; aj = sum; }
            }
        }

        const double wi = si * (ai - old_i), wj = sj * (aj - old_j);
        const double* ki = K_.col(point(i)).data();
        const double* kj = K_.col(point(j)).data();
        for (std::size_t k = 0; k < n_; ++k) {
            const double g = ki[k] * wi + kj[k] * wj;
            grad_[k] += g;
            grad_[k + n_] -= g;
        }
    }

    double compute_rho() const {
        double ub = std::numeric_limits<double>::infinity();
        double lb = -std::numeric_limits<double>::infinity();
        double sum_free = 0.0;
        std::size_t nr_free = 0;
        const std::size_t l = 2 * n_;
        for (std::size_t t = 0; t < l; ++t) {
            const bool positive = t < n_;
            const double yg = sign(t) * grad_[t];
            if (alpha_[t] >= C_) {
                if (!positive) ub = std::min(ub, yg);
                else lb = std::max(lb, yg);
            } else if (alpha_[t] <= 0.0) {
                if (positive) ub = std::min(ub, yg);
                else lb = std::max(lb, yg);
            } else {
                ++nr_free;
                sum_free += yg;
            }
        }
        if (nr_free > 0) return sum_free / static_cast<double>(nr_free);
        return (ub + lb) / 2.0;
    }

    const Matrix& K_;
    std::size_t n_;
    double C_;
    std::vector<double> alpha_;
    std::vector<double> grad_;
    std::vector<double> diag_;
};

Matrix drop_index(const Matrix& M, Eigen::Index skip) {
    const Eigen::Index n = M.rows();
    Matrix out(n - 1, n - 1);
    for (Eigen::Index c = 0, oc = 0; c < n; ++c) {
        if (c == skip) continue;
        for (Eigen::Index r = 0, orow = 0; r < n; ++r) {
            if (r == skip) continue;
            out(orow++, oc) = M(r, c);
        }
        ++oc;
    }
    return out;
}

Vector drop_index(const Vector& v, Eigen::Index skip) {
    Vector out(v.size() - 1);
    for (Eigen::Index r = 0, o = 0; r < v.size(); ++r)
        if (r != skip) out(o++) = v(r);
    return out;
}

} // namespace

void SvrParams::validate() const {
    if (!(C > 0.0) || !std::isfinite(C)) throw InvalidInput("SvrParams: C must be positive and finite");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw InvalidInput("SvrParams: epsilon must be nonnegative");
    if (!(tol > 0.0)) throw InvalidInput("SvrParams: tol must be positive");
}

DualSolution solve_svr_dual(const Matrix& gram, const Vector& y, const SvrParams& params) {
    params.validate();
    if (y.size() < 1) throw InvalidInput("solve_svr_dual: empty training set");
    if (gram.rows() != y.size() || gram.cols() != y.size())
        throw InvalidInput("solve_svr_dual: Gram matrix and target sizes differ");
    if (!y.allFinite() || !gram.allFinite()) throw InvalidInput("solve_svr_dual: non-finite input");
    SmoSolver solver(gram, y, params);
    return solver.run(params.tol, params.update_budget(static_cast<std::size_t>(y.size())));
}

std::size_t SvrModel::support_vector_count() const {
    return static_cast<std::size_t>((beta.array() != 0.0).count());
}

SvrModel fit_svr(const Matrix& X, const Vector& y, const KernelSpec& kernel, const SvrParams& params) {
    if (X.rows() < 2) throw InvalidInput("fit_svr: need at least two samples");
    if (X.rows() != y.size()) throw InvalidInput("fit_svr: X and y row counts differ");
    if (!X.allFinite() || !y.allFinite()) throw InvalidInput("fit_svr: non-finite input");
    const Matrix gram = gram_matrix(kernel, X);
    DualSolution sol = solve_svr_dual(gram, y, params);

    SvrModel model;
    model.beta = std::move(sol.beta);
    model.bias = sol.bias;
    model.kernel = kernel;
    model.train_x = X;
    model.params = params;
    model.iterations = sol.iterations;
    model.kkt_violation = sol.violation;
    return model;
}

double predict(const SvrModel& model, std::span<const double> x) {
    if (static_cast<Eigen::Index>(x.size()) != model.train_x.cols())
        throw InvalidInput("predict: input has " + std::to_string(x.size()) + " features, model expects " +
                           std::to_string(model.train_x.cols()));
    const Eigen::Map<const Vector> xv(x.data(), static_cast<Eigen::Index>(x.size()));
    if (!xv.allFinite()) throw InvalidInput("predict: non-finite input");
    const bool distances = model.kernel.uses_distance();
    double f = model.bias;
    for (Eigen::Index i = 0; i < model.beta.size(); ++i) {
        const double b = model.beta(i);
        if (b == 0.0) continue;
        double acc = 0.0;
        for (Eigen::Index k = 0; k < xv.size(); ++k) {
            if (distances) {
                const double d = model.train_x(i, k) - xv(k);
                acc += d * d;
            } else {
                acc += model.train_x(i, k) * xv(k);
            }
        }
        f += b * kernel_from_accumulated(model.kernel, acc);
    }
    return f;
}

Vector predict(const SvrModel& model, const Matrix& X) {
    Vector out(X.rows());
    std::vector<double> row(static_cast<std::size_t>(X.cols()));
    for (Eigen::Index r = 0; r < X.rows(); ++r) {
        for (Eigen::Index c = 0; c < X.cols(); ++c) row[static_cast<std::size_t>(c)] = X(r, c);
        out(r) = predict(model, row);
    }
    return out;
}

double weight_norm_sq(const SvrModel& model, const FeatureSet& active_features) {
    if (active_features.empty()) throw InvalidInput("weight_norm_sq: empty feature set");
    const auto p = static_cast<std::size_t>(model.train_x.cols());
    std::vector<bool> seen(p, false);
    for (std::size_t f : active_features) {
        if (f >= p) throw InvalidInput("weight_norm_sq: feature index out of range");
        if (seen[f]) throw InvalidInput("weight_norm_sq: duplicate feature index");
        seen[f] = true;
    }
    Matrix sub(model.train_x.rows(), static_cast<Eigen::Index>(active_features.size()));
    for (std::size_t c = 0; c < active_features.size(); ++c)
        sub.col(static_cast<Eigen::Index>(c)) = model.train_x.col(static_cast<Eigen::Index>(active_features[c]));
    const Matrix K = kernel_from_accumulators(model.kernel, pairwise_accumulators(sub, model.kernel.uses_distance()));
    return model.beta.dot(K * model.beta);
}

double svr_dual_objective(const Matrix& gram, const Vector& y, const Vector& beta, double epsilon) {
    return 0.5 * beta.dot(gram * beta) - y.dot(beta) + epsilon * beta.lpNorm<1>();
}

double svr_primal_objective(const Matrix& gram, const Vector& y, const Vector& beta, double bias, double C,
                            double epsilon) {
    const Vector f = gram * beta;
    double loss = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i)
        loss += std::max(0.0, std::abs(y(i) - f(i) - bias) - epsilon);
    return 0.5 * beta.dot(f) + C * loss;
}

double svr_kkt_violation(const Matrix& gram, const Vector& y, const DualSolution& sol, const SvrParams& params) {
    const Vector f = (gram * sol.beta).array() + sol.bias;
    const double eps = params.epsilon;
    const double C = params.C;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double r = y(i) - f(i);
        const double b = sol.beta(i);
        double v = 0.0;
        if (b == 0.0) {
            v = std::max(0.0, std::abs(r) - eps);
        } else if (b > 0.0 && b < C) {
            v = std::abs(r - eps);
        } else if (b >= C) {
            v = std::max(0.0, eps - r);
        } else if (b < 0.0 && b > -C) {
            v = std::abs(r + eps);
        } else {
            v = std::max(0.0, r + eps);
        }
        worst = std::max(worst, v);
    }
    return worst;
}

double loocv_mse(const Matrix& gram, const Vector& y, const SvrParams& params, bool warm_start) {
    const Eigen::Index n = y.size();
    if (n < 3) throw InvalidInput("loocv_mse: need at least three samples");
    params.validate();
    if (!y.allFinite() || !gram.allFinite()) throw InvalidInput("loocv_mse: non-finite input");
    // Warm start: each fold begins at the full-data solution with the held-out
    // coefficient spread over the remaining points, which keeps the start feasible.
    // Indefinite kernels and full fits that overrun fall back to cold starts.
    std::optional<Vector> full;
    if (warm_start) {
        try {
            full = SmoSolver(gram, y, params).run(params.tol, params.update_budget(static_cast<std::size_t>(n))).beta;
        } catch (const ConvergenceError&) {
        }
    }
    double sse = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        Vector start;
        if (full) {
            start = drop_index(*full, i);
            double owed = (*full)(i);
            for (Eigen::Index k = 0; k < start.size() && owed != 0.0; ++k) {
                const double room = owed > 0.0 ? params.C - start(k) : -params.C - start(k);
                const double d = owed > 0.0 ? std::min(room, owed) : std::max(room, owed);
                start(k) += d;
                owed -= d;
            }
        }
        const Vector yi = drop_index(y, i);
        const Matrix Ki = drop_index(gram, i);
        const DualSolution sol = SmoSolver(Ki, yi, params, full ? &start : nullptr)
                                     .run(params.tol, params.update_budget(static_cast<std::size_t>(n - 1)));
        double pred = sol.bias;
        for (Eigen::Index r = 0, o = 0; r < n; ++r) {
            if (r == i) continue;
            pred += sol.beta(o++) * gram(i, r);
        }
        const double e = y(i) - pred;
        sse += e * e;
    }
    return sse / static_cast<double>(n);
}

} // namespace netinfer
