#include <netinfer/nsvm.hpp>

#include <netinfer/error.hpp>
#include <netinfer/parallel.hpp>

#include <spdlog/spdlog.h>

#include <cmath>
#include <limits>
#include <string>

namespace netinfer {

namespace {

struct Candidate {
    KernelSpec kernel;
    double C;
    bool is_default;
};

// Strict preference used for ties in LOOCV error.
bool preferred_on_tie(const Candidate& a, const TunedHyperparameters& incumbent) {
    if (incumbent.is_default) return false;
    if (a.C != incumbent.C) return a.C < incumbent.C;
    if (a.kernel.kstar != incumbent.kernel.kstar) return a.kernel.kstar < incumbent.kernel.kstar;
    return a.kernel.degree < incumbent.kernel.degree;
}

std::vector<Candidate> grid_candidates(const KernelSpec& base, double default_C, const TuningGrid& grid) {
    std::vector<Candidate> out;
    out.push_back({base, default_C, true});
    if (base.family == KernelFamily::Linear) {
        for (double C : grid.C_values) out.push_back({base, C, false});
        return out;
    }
    const std::vector<int> degrees =
        base.family == KernelFamily::Polynomial ? grid.degrees : std::vector<int>{base.degree};
    for (int d : degrees) {
        for (double k : grid.kstar_values) {
            for (double C : grid.C_values) {
                KernelSpec spec = base;
                spec.kstar = k;
                spec.degree = d;
                out.push_back({spec, C, false});
            }
        }
    }
    return out;
}

} // namespace

TuningGrid TuningGrid::defaults() {
    TuningGrid g;
    for (int e = -6; e <= -1; ++e) g.kstar_values.push_back(std::pow(10.0, e));
    for (int e = 1; e <= 6; ++e) g.C_values.push_back(std::pow(10.0, e));
    g.degrees = {1, 2, 3, 4, 5};
    return g;
}

void TuningGrid::validate() const {
    if (kstar_values.empty() || C_values.empty() || degrees.empty())
        throw InvalidInput("TuningGrid: every list must be nonempty");
    for (double k : kstar_values)
        if (!(k > 0.0)) throw InvalidInput("TuningGrid: kstar values must be positive");
    for (double c : C_values)
        if (!(c > 0.0)) throw InvalidInput("TuningGrid: C values must be positive");
    for (int d : degrees)
        if (d < 1 || d > 5) throw InvalidInput("TuningGrid: degrees must lie in 1..5");
}

TunedHyperparameters tune_hyperparameters(const Matrix& X, const Vector& y, const KernelSpec& default_kernel,
                                          double default_C, const TuningGrid& grid, const SvrParams& params) {
    grid.validate();
    default_kernel.validate();
    if (X.rows() != y.size()) throw InvalidInput("tune_hyperparameters: X and y row counts differ");
    const Matrix acc = pairwise_accumulators(X, default_kernel.uses_distance());

    TunedHyperparameters best;
    best.loocv_mse = std::numeric_limits<double>::infinity();
    bool have_best = false;
    std::size_t failed = 0;
    for (const Candidate& c : grid_candidates(default_kernel, default_C, grid)) {
        SvrParams point = params;
        point.C = c.C;
        double mse;
        try {
            mse = loocv_mse(kernel_from_accumulators(c.kernel, acc), y, point, c.kernel.is_psd());
        } catch (const ConvergenceError&) {
            ++failed;
            continue;
        }
        const bool better = !have_best || mse < best.loocv_mse || (mse == best.loocv_mse && preferred_on_tie(c, best));
        if (better) {
            best.kernel = c.kernel;
            best.C = c.C;
            best.loocv_mse = mse;
            best.is_default = c.is_default;
            have_best = true;
        }
    }
    if (!have_best) throw ComputationError("tune_hyperparameters: no grid point converged");
    best.failed_points = failed;
    return best;
}

KernelSpec NsvmOptions::default_kernel(std::size_t p) const {
    KernelSpec spec = KernelSpec::defaults(family, p);
    if (kernel) {
        spec = *kernel;
        spec.family = family;
        if (!(spec.kstar > 0.0)) spec.kstar = 1.0 / static_cast<double>(p);
    }
    return spec;
}

ColumnResult infer_nsvm_column(const LaggedPairs& pairs, std::size_t target, const NsvmOptions& options) {
    const auto p = static_cast<std::size_t>(pairs.X.cols());
    if (target >= static_cast<std::size_t>(pairs.Y.cols())) throw InvalidInput("infer_nsvm_column: target out of range");
    const Vector y = pairs.Y.col(static_cast<Eigen::Index>(target));

    ColumnResult out;
    out.target = target;
    out.kernel = options.default_kernel(p);
    out.C = options.params.C;
    if (options.tune) {
        const TunedHyperparameters tuned =
            tune_hyperparameters(pairs.X, y, out.kernel, options.params.C, options.grid, options.params);
        out.kernel = tuned.kernel;
        out.C = tuned.C;
    }
    SvrParams params = options.params;
    params.C = out.C;

    out.selection.ranking = rank_features(pairs.X, y, out.kernel, params);
    out.selection.loocv_errors =
        prefix_loocv_errors(pairs.X, y, out.selection.ranking, out.kernel, params, options.max_prefix);
    const auto& errs = out.selection.loocv_errors;
    out.selection.kopt = select_kopt(std::span<const double>(errs.data(), static_cast<std::size_t>(errs.size())));
    out.intercept_only_error = intercept_only_loocv(y);

    if (options.empty_guard && !(errs.minCoeff() < out.intercept_only_error)) {
        out.emptied_by_guard = true;
        return out;
    }
    out.parents.assign(out.selection.ranking.order.begin(),
                       out.selection.ranking.order.begin() + static_cast<std::ptrdiff_t>(out.selection.kopt));
    return out;
}

Network infer_nsvm(const TimeSeries& ts, const NsvmOptions& options) {
    const LaggedPairs pairs = build_lagged_pairs(ts);
    const std::size_t p = ts.p();
    std::vector<std::optional<ColumnResult>> columns(p);
    parallel_for(p, options.threads, [&](std::size_t j) {
        try {
            columns[j] = infer_nsvm_column(pairs, j, options);
        } catch (const Error& e) {
            spdlog::warn("nsvm: response {} failed, leaving it without parents: {}", j + 1, e.what());
        }
    });

    Network net(p);
    std::size_t failures = 0;
    for (std::size_t j = 0; j < p; ++j) {
        if (!columns[j]) {
            ++failures;
            continue;
        }
        for (std::size_t i : columns[j]->parents) net.set_edge(i, j);
    }
    if (failures == p) throw ComputationError("infer_nsvm: every response failed");
    return net;
}

} // namespace netinfer
