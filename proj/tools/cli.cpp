#include "cli.hpp"

#include <netinfer/config.hpp>
#include <netinfer/error.hpp>
#include <netinfer/experiment.hpp>
#include <netinfer/io.hpp>
#include <netinfer/metrics.hpp>
#include <netinfer/parallel.hpp>
#include <netinfer/simulate.hpp>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <optional>
#include <ostream>

namespace netinfer::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

bool parse_switch(const std::string& value, const char* flag) {
    if (value == "on") return true;
    if (value == "off") return false;
    throw UsageError(std::string(flag) + " expects 'on' or 'off', got '" + value + "'");
}

// "--method nsvm --kernel rbf" and "--method nsvm-R" name the same thing.
Method resolve_method(const std::string& method, const std::string& kernel) {
    if (method == "nsvm") {
        KernelFamily family = KernelFamily::Linear;
        if (!kernel.empty()) {
            try {
                family = parse_kernel_family(kernel);
            } catch (const InvalidInput& e) {
                throw UsageError(e.what());
            }
        }
        switch (family) {
        case KernelFamily::Linear: return Method::NsvmLinear;
        case KernelFamily::Rbf: return Method::NsvmRbf;
        case KernelFamily::Sigmoid: return Method::NsvmSigmoid;
        case KernelFamily::Polynomial: return Method::NsvmPoly;
        }
    }
    Method m;
    try {
        m = parse_method(method);
    } catch (const InvalidInput& e) {
        throw UsageError(e.what());
    }
    if (!kernel.empty()) {
        const auto own = method_kernel(m);
        if (!own) throw UsageError("--kernel only applies to nsvm methods");
        try {
            if (parse_kernel_family(kernel) != *own) throw UsageError("--kernel " + kernel + " contradicts --method " + method);
        } catch (const InvalidInput& e) {
            throw UsageError(e.what());
        }
    }
    return m;
}

void print_rates(std::ostream& out, const ConfusionCounts& c, const Rates& r) {
    out << "tp=" << c.tp << " fp=" << c.fp << " tn=" << c.tn << " fn=" << c.fn << '\n';
    out << "tpr=" << format_roundtrip(r.tpr) << " fpr=" << format_roundtrip(r.fpr) << " tnr=" << format_roundtrip(r.tnr)
        << " fnr=" << format_roundtrip(r.fnr) << " mce=" << format_roundtrip(r.mce) << '\n';
    if (r.no_positives) out << "note: truth has no edges; tpr and fnr set to 0\n";
    if (r.no_negatives) out << "note: truth has no non-edges; tnr and fpr set to 0\n";
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Directed network inference from multivariate time series"};
    app.name("netinfer");
    app.require_subcommand(1);

    std::string config_path, method_name, kernel_name, out_dir, tune;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> runs;
    std::size_t threads = 0;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", out_dir, "Output directory");
        sub->add_option("--threads", threads, "Worker threads (default: NETINFER_THREADS, else 1)");
    };

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Simulate one series with its true network");
    std::string sim_mode = "linear", stabilize;
    std::size_t sim_p = 10, sim_n = 20;
    double sim_pi = 0.05;
    sim_cmd->add_option("--config", config_path, "JSON config; its sim section, first p and n are used");
    sim_cmd->add_option("--mode", sim_mode, "linear, nonlinear or mixture");
    sim_cmd->add_option("--p", sim_p, "Number of variables");
    sim_cmd->add_option("--n", sim_n, "Number of timepoints");
    sim_cmd->add_option("--pi", sim_pi, "Proportion of true edges");
    sim_cmd->add_option("--seed", seed, "Random seed");
    sim_cmd->add_option("--stabilize", stabilize, "on/off (default: on for linear)");
    add_common(sim_cmd);

    // infer
    auto* infer_cmd = app.add_subcommand("infer", "Infer a network from a series CSV");
    std::string series_path;
    infer_cmd->add_option("series", series_path, "Series CSV (rows = timepoints)")->required();
    infer_cmd->add_option("--method", method_name, "nsvm, nsvm-L, nsvm-R, nsvm-S, nsvm-P, rbn or nlasso");
    infer_cmd->add_option("--kernel", kernel_name, "linear, rbf, sigmoid or poly (with --method nsvm)");
    infer_cmd->add_option("--config", config_path, "JSON config supplying svr, tuning, kernels and lasso settings");
    infer_cmd->add_option("--tune", tune, "on/off hyperparameter search");
    infer_cmd->add_option("--seed", seed, "Accepted for symmetry; inference is deterministic");
    add_common(infer_cmd);

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Run the simulation benchmark");
    bench_cmd->add_option("--config", config_path, "JSON experiment config");
    bench_cmd->add_option("--runs", runs, "Runs per p (overrides config)");
    bench_cmd->add_option("--seed", seed, "Master seed (overrides config)");
    bench_cmd->add_option("--method", method_name, "Restrict to one method");
    bench_cmd->add_option("--kernel", kernel_name, "Kernel for --method nsvm");
    bench_cmd->add_option("--tune", tune, "on/off hyperparameter search");
    add_common(bench_cmd);

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Compare an estimated adjacency CSV against the truth");
    std::string truth_path, estimate_path;
    eval_cmd->add_option("truth", truth_path, "True adjacency CSV")->required();
    eval_cmd->add_option("estimate", estimate_path, "Estimated adjacency CSV")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "netinfer: " << e.what() << "\n" << "Run with --help for usage.\n";
        return kExitUsage;
    }

    try {
        if (sim_cmd->parsed()) {
            SimConfig sc;
            if (!config_path.empty()) {
                const ExperimentConfig cfg = load_experiment_config(config_path);
                sc = cfg.sim;
                sc.p = cfg.p_values.front();
                sc.n = cfg.n;
                sc.seed = cfg.master_seed;
            }
            if (sim_cmd->count("--mode") || config_path.empty()) {
                try {
                    sc.mode = parse_sim_mode(sim_mode);
                } catch (const InvalidInput& e) {
                    throw UsageError(e.what());
                }
            }
            if (sim_cmd->count("--p") || config_path.empty()) sc.p = sim_p;
            if (sim_cmd->count("--n") || config_path.empty()) sc.n = sim_n;
            if (sim_cmd->count("--pi") || config_path.empty()) sc.pi = sim_pi;
            if (seed) sc.seed = *seed;
            if (!stabilize.empty()) sc.stabilize = parse_switch(stabilize, "--stabilize");
            const SimOutput sim = simulate(sc);
            const std::filesystem::path dir = out_dir.empty() ? "netinfer-sim" : out_dir;
            save_sim_output(dir, sc, sim);
            out << "simulated " << to_string(sc.mode) << " series: p=" << sc.p << " n=" << sc.n
                << " true_edges=" << sim.truth.edge_count() << " -> " << dir.string() << '\n';
            return kExitOk;
        }

        if (infer_cmd->parsed()) {
            MethodSettings settings;
            if (!config_path.empty()) settings = load_experiment_config(config_path).settings;
            if (!tune.empty()) settings.tune = parse_switch(tune, "--tune");
            settings.threads = resolve_thread_count(threads);
            const Method m = resolve_method(method_name.empty() ? "nsvm" : method_name, kernel_name);
            const TimeSeries ts = load_series_csv(series_path);
            const Network net = run_method(m, ts, settings);
            const std::filesystem::path dir = out_dir.empty() ? "netinfer-out" : out_dir;
            save_network(dir, net);
            out << to_string(m) << ": " << net.edge_count() << " edges among " << net.p() << " variables -> "
                << dir.string() << '\n';
            return kExitOk;
        }

        if (bench_cmd->parsed()) {
            ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : load_experiment_config(config_path);
            if (runs) cfg.runs = *runs;
            if (seed) cfg.master_seed = *seed;
            if (threads) cfg.threads = threads;
            if (!out_dir.empty()) cfg.output_dir = out_dir;
            if (!tune.empty()) cfg.settings.tune = parse_switch(tune, "--tune");
            if (!method_name.empty()) cfg.methods = {resolve_method(method_name, kernel_name)};
            else if (!kernel_name.empty()) throw UsageError("--kernel requires --method");
            cfg.validate();
            const ExperimentResult res = run_experiment(cfg);
            write_reports(cfg, res);
            write_text_file(cfg.output_dir / "config.json", experiment_config_json(cfg));
            out << comparison_table(cfg, res);
            if (!res.failures.empty())
                err << res.failures.size() << " method run(s) failed; see " << (cfg.output_dir / "failures.log").string()
                    << '\n';
            if (res.total_method_failure()) {
                err << "netinfer: at least one method failed on every run\n";
                return kExitMethodFailure;
            }
            return kExitOk;
        }

        if (eval_cmd->parsed()) {
            const Network truth = load_adjacency_csv(truth_path);
            const Network est = load_adjacency_csv(estimate_path);
            const ConfusionCounts c = confusion(truth, est);
            print_rates(out, c, rates(c));
            return kExitOk;
        }
    } catch (const UsageError& e) {
        err << "netinfer: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "netinfer: " << e.what() << '\n';
        return kExitUsage;
    } catch (const InvalidInput& e) {
        err << "netinfer: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "netinfer: " << e.what() << '\n';
        return kExitMethodFailure;
    }
    return kExitUsage;
}

} // namespace netinfer::cli
