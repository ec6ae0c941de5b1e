#pragma once

#include <netinfer/lasso.hpp>
#include <netinfer/metrics.hpp>
#include <netinfer/nsvm.hpp>
#include <netinfer/simulate.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace netinfer {

enum class Method { NsvmLinear, NsvmRbf, NsvmSigmoid, NsvmPoly, Rbn, Nlasso };

/// "nsvm-L", "nsvm-R", "nsvm-S", "nsvm-P", "rbn", "nlasso".
std::string_view to_string(Method m);
Method parse_method(std::string_view name);
std::optional<KernelFamily> method_kernel(Method m);
/// Kernel column of the CSV reports; "none" for non-SVM methods.
std::string_view kernel_label(Method m);

/// Everything a method needs besides the data.
struct MethodSettings {
    bool tune = true;
    TuningGrid grid = TuningGrid::defaults();
    SvrParams svr;
    std::size_t max_prefix = 0;
    /// Default-point overrides, matched by family (constants, degree, kstar; kstar <= 0 means 1/p).
    std::vector<KernelSpec> kernels;
    NlassoOptions lasso;
    /// Per-response workers inside one inference.
    std::size_t threads = 1;
};

Network run_method(Method m, const TimeSeries& ts, const MethodSettings& settings);

struct ExperimentConfig {
    /// Template: mode, pi, ranges and stabilisation. p, n and seed are set per run.
    SimConfig sim;
    std::vector<std::size_t> p_values{50, 100};
    std::size_t n = 20;
    std::size_t runs = 100;
    std::vector<Method> methods{Method::NsvmLinear, Method::NsvmRbf, Method::NsvmSigmoid,
                                Method::NsvmPoly,   Method::Rbn,     Method::Nlasso};
    MethodSettings settings;
    std::uint64_t master_seed = 1;
    std::filesystem::path output_dir = "netinfer-out";
    /// Workers over (p, run) tasks; 0 defers to NETINFER_THREADS, then 1.
    std::size_t threads = 0;

    void validate() const;
};

struct RunRecord {
    Method method;
    std::size_t p;
    std::size_t run;  // 1-based
    Rates rates;
};

struct RunFailure {
    Method method;
    std::size_t p;
    std::size_t run;
    std::string error;
};

struct AggregateRow {
    Method method;
    std::size_t p;
    /// Unset when every run of this method at this p failed.
    std::optional<RateSummary> summary;
};

struct ExperimentResult {
    /// Sorted by method (config order), p (config order), run.
    std::vector<RunRecord> records;
    std::vector<RunFailure> failures;
    /// One row per (method, p), same order.
    std::vector<AggregateRow> aggregates;

    /// Some method failed on every run it attempted.
    bool total_method_failure() const;
};

/// Seed of run `run` at size `p`; shared by every method of that run.
std::uint64_t run_seed(std::uint64_t master_seed, std::size_t p, std::size_t run);

/// Simulates and scores every (p, run, method) combination on a pool of cfg.threads workers.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

std::string runs_csv(const ExperimentConfig& cfg, const ExperimentResult& res);
std::string aggregate_csv(const ExperimentConfig& cfg, const ExperimentResult& res);
std::string failures_log(const ExperimentResult& res);
/// Text table: rows TPR/FPR/TNR/FNR/MCE, one column per method, plus published
/// G1DBN / Genenet reference columns where a matching setting exists.
std::string comparison_table(const ExperimentConfig& cfg, const ExperimentResult& res);
/// SVG scatter of (TNR, TPR) per method for one p.
std::string scatter_svg(const ExperimentConfig& cfg, const ExperimentResult& res, std::size_t p);

/// Writes runs.csv, aggregate.csv, table.txt, failures.log and figure_p<P>.svg into cfg.output_dir.
void write_reports(const ExperimentConfig& cfg, const ExperimentResult& res);

} // namespace netinfer
