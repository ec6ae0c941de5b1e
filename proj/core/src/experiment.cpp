#include <netinfer/experiment.hpp>

#include <netinfer/error.hpp>
#include <netinfer/io.hpp>
#include <netinfer/parallel.hpp>
#include <netinfer/rbn.hpp>

#include <spdlog/spdlog.h>

#include <algorithm>
#include <array>
#include <limits>
#include <map>
#include <sstream>

namespace netinfer {

namespace {

// Published reference values (rows TPR, FPR, TNR, FNR, MCE) for methods this
// library does not implement. Keyed by simulation mode and p.
struct PublishedColumn {
    std::string_view label;
    std::array<double, 5> values;
};

struct PublishedBlock {
    SimMode mode;
    std::size_t p;
    std::array<PublishedColumn, 3> columns;
};

constexpr std::array<PublishedBlock, 6> kPublished{{
    {SimMode::Linear, 50,
     {{{"G1-S1", {0.51, 0.15, 0.85, 0.49, 0.17}},
       {"G1-S2", {0.47, 0.11, 0.89, 0.53, 0.13}},
       {"Genenet", {0.11, 0.01, 0.99, 0.89, 0.05}}}}},
    {SimMode::Linear, 100,
     {{{"G1-S1", {0.26, 0.11, 0.89, 0.74, 0.14}},
       {"G1-S2", {0.21, 0.07, 0.93, 0.79, 0.11}},
       {"Genenet", {0.12, 0.01, 0.99, 0.88, 0.06}}}}},
    {SimMode::Nonlinear, 50,
     {{{"G1-S1", {0.49, 0.22, 0.78, 0.51, 0.24}},
       {"G1-S2", {0.39, 0.16, 0.84, 0.61, 0.18}},
       {"Genenet", {0.24, 0.04, 0.96, 0.76, 0.07}}}}},
    {SimMode::Nonlinear, 100,
     {{{"G1-S1", {0.43, 0.17, 0.83, 0.57, 0.19}},
       {"G1-S2", {0.29, 0.07, 0.93, 0.71, 0.10}},
       {"Genenet", {0.17, 0.03, 0.97, 0.83, 0.07}}}}},
    {SimMode::Mixture, 50,
     {{{"G1-S1", {0.61, 0.24, 0.76, 0.39, 0.25}},
       {"G1-S2", {0.49, 0.16, 0.84, 0.51, 0.18}},
       {"Genenet", {0.33, 0.03, 0.97, 0.67, 0.07}}}}},
    {SimMode::Mixture, 100,
     {{{"G1-S1", {0.46, 0.17, 0.83, 0.54, 0.19}},
       {"G1-S2", {0.31, 0.07, 0.93, 0.69, 0.10}},
       {"Genenet", {0.14, 0.02, 0.98, 0.86, 0.06}}}}},
}};

const PublishedBlock* published_for(SimMode mode, std::size_t p) {
    for (const auto& b : kPublished)
        if (b.mode == mode && b.p == p) return &b;
    return nullptr;
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

std::string_view to_string(Method m) {
    switch (m) {
    case Method::NsvmLinear: return "nsvm-L";
    case Method::NsvmRbf: return "nsvm-R";
    case Method::NsvmSigmoid: return "nsvm-S";
    case Method::NsvmPoly: return "nsvm-P";
    case Method::Rbn: return "rbn";
    case Method::Nlasso: return "nlasso";
    }
    return "rbn";
}

Method parse_method(std::string_view name) {
    for (Method m : {Method::NsvmLinear, Method::NsvmRbf, Method::NsvmSigmoid, Method::NsvmPoly, Method::Rbn,
                     Method::Nlasso})
        if (name == to_string(m)) return m;
    throw InvalidInput("unknown method '" + std::string(name) + "'");
}

std::optional<KernelFamily> method_kernel(Method m) {
    switch (m) {
    case Method::NsvmLinear: return KernelFamily::Linear;
    case Method::NsvmRbf: return KernelFamily::Rbf;
    case Method::NsvmSigmoid: return KernelFamily::Sigmoid;
    case Method::NsvmPoly: return KernelFamily::Polynomial;
    default: return std::nullopt;
    }
}

std::string_view kernel_label(Method m) {
    const auto k = method_kernel(m);
    return k ? to_string(*k) : std::string_view("none");
}

Network run_method(Method m, const TimeSeries& ts, const MethodSettings& settings) {
    if (m == Method::Rbn) return learn_rbn(ts, RbnOptions{settings.threads});
    if (m == Method::Nlasso) {
        NlassoOptions opts = settings.lasso;
        opts.threads = settings.threads;
        return infer_nlasso(ts, opts);
    }
    NsvmOptions opts;
    opts.family = *method_kernel(m);
    for (const KernelSpec& k : settings.kernels)
        if (k.family == opts.family) opts.kernel = k;
    opts.tune = settings.tune;
    opts.grid = settings.grid;
    opts.params = settings.svr;
    opts.max_prefix = settings.max_prefix;
    opts.threads = settings.threads;
    return infer_nsvm(ts, opts);
}

void ExperimentConfig::validate() const {
    if (runs < 1) throw InvalidInput("ExperimentConfig: runs must be at least 1");
    if (methods.empty()) throw InvalidInput("ExperimentConfig: methods must be nonempty");
    if (p_values.empty()) throw InvalidInput("ExperimentConfig: p_values must be nonempty");
    SimConfig probe = sim;
    probe.n = n;
    for (std::size_t p : p_values) {
        probe.p = p;
        probe.validate();
    }
    settings.svr.validate();
    if (settings.tune) settings.grid.validate();
}

bool ExperimentResult::total_method_failure() const {
    std::map<Method, std::pair<std::size_t, std::size_t>> tally;  // attempts, failures
    for (const auto& r : records) ++tally[r.method].first;
    for (const auto& f : failures) {
        ++tally[f.method].first;
        ++tally[f.method].second;
    }
    for (const auto& [m, t] : tally)
        if (t.first > 0 && t.first == t.second) return true;
    return false;
}

std::uint64_t run_seed(std::uint64_t master_seed, std::size_t p, std::size_t run) {
    return derive_seed(master_seed, {static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(run)});
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    struct Slot {
        std::vector<std::optional<Rates>> rates;
        std::vector<std::string> errors;
    };
    const std::size_t tasks = cfg.p_values.size() * cfg.runs;
    std::vector<Slot> slots(tasks);
    MethodSettings settings = cfg.settings;
    settings.threads = 1;

    parallel_for(tasks, resolve_thread_count(cfg.threads), [&](std::size_t task) {
        const std::size_t p = cfg.p_values[task / cfg.runs];
        const std::size_t run = task % cfg.runs + 1;
        Slot& slot = slots[task];
        slot.rates.assign(cfg.methods.size(), std::nullopt);
        slot.errors.assign(cfg.methods.size(), {});

        SimConfig sc = cfg.sim;
        sc.p = p;
        sc.n = cfg.n;
        sc.seed = run_seed(cfg.master_seed, p, run);
        std::optional<SimOutput> sim;
        try {
            sim = simulate(sc);
        } catch (const Error& e) {
            for (auto& err : slot.errors) err = std::string("simulation: ") + e.what();
            return;
        }
        for (std::size_t k = 0; k < cfg.methods.size(); ++k) {
            try {
                const Network est = run_method(cfg.methods[k], sim->series, settings);
                slot.rates[k] = rates(confusion(sim->truth, est));
            } catch (const Error& e) {
                slot.errors[k] = e.what();
                spdlog::warn("{} failed on p={} run={}: {}", to_string(cfg.methods[k]), p, run, e.what());
            }
        }
    });

    ExperimentResult res;
    for (std::size_t k = 0; k < cfg.methods.size(); ++k) {
        for (std::size_t pi = 0; pi < cfg.p_values.size(); ++pi) {
            std::vector<Rates> ok;
            for (std::size_t r = 0; r < cfg.runs; ++r) {
                const Slot& slot = slots[pi * cfg.runs + r];
                if (slot.rates[k]) {
                    res.records.push_back({cfg.methods[k], cfg.p_values[pi], r + 1, *slot.rates[k]});
                    ok.push_back(*slot.rates[k]);
                } else {
                    res.failures.push_back({cfg.methods[k], cfg.p_values[pi], r + 1, slot.errors[k]});
                }
            }
            AggregateRow row{cfg.methods[k], cfg.p_values[pi], std::nullopt};
            if (!ok.empty()) row.summary = aggregate(ok);
            res.aggregates.push_back(row);
        }
    }
    return res;
}

std::string runs_csv(const ExperimentConfig& cfg, const ExperimentResult& res) {
    std::ostringstream out;
    out << "method,kernel,p,n,pi,run,tpr,fpr,tnr,fnr,mce\n";
    for (const auto& r : res.records) {
        out << to_string(r.method) << ',' << kernel_label(r.method) << ',' << r.p << ',' << cfg.n << ','
            << format_roundtrip(cfg.sim.pi) << ',' << r.run << ',' << format_fixed(r.rates.tpr) << ','
            << format_fixed(r.rates.fpr) << ',' << format_fixed(r.rates.tnr) << ',' << format_fixed(r.rates.fnr)
            << ',' << format_fixed(r.rates.mce) << '\n';
    }
    return out.str();
}

std::string aggregate_csv(const ExperimentConfig& cfg, const ExperimentResult& res) {
    std::ostringstream out;
    out << "method,kernel,p,n,pi,runs,tpr_mean,tpr_sd,fpr_mean,fpr_sd,tnr_mean,tnr_sd,fnr_mean,fnr_sd,mce_mean,mce_sd\n";
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const auto& a : res.aggregates) {
        const Rates mean = a.summary ? a.summary->mean : Rates{nan, nan, nan, nan, nan};
        const Rates sd = a.summary ? a.summary->sd : Rates{nan, nan, nan, nan, nan};
        out << to_string(a.method) << ',' << kernel_label(a.method) << ',' << a.p << ',' << cfg.n << ','
            << format_roundtrip(cfg.sim.pi) << ',' << (a.summary ? a.summary->count : 0);
        for (auto member : {&Rates::tpr, &Rates::fpr, &Rates::tnr, &Rates::fnr, &Rates::mce})
            out << ',' << format_fixed(mean.*member) << ',' << format_fixed(sd.*member);
        out << '\n';
    }
    return out.str();
}

std::string failures_log(const ExperimentResult& res) {
    std::ostringstream out;
    for (const auto& f : res.failures)
        out << to_string(f.method) << "\tp=" << f.p << "\trun=" << f.run << "\t" << f.error << '\n';
    return out.str();
}

std::string comparison_table(const ExperimentConfig& cfg, const ExperimentResult& res) {
    static constexpr std::array<std::string_view, 5> row_names{"TPR", "FPR", "TNR", "FNR", "MCE"};
    static constexpr std::array<double Rates::*, 5> members{&Rates::tpr, &Rates::fpr, &Rates::tnr, &Rates::fnr,
                                                           &Rates::mce};
    std::ostringstream out;
    out << "Simulation: " << to_string(cfg.sim.mode) << ", n=" << cfg.n << ", pi=" << format_roundtrip(cfg.sim.pi)
        << ", runs=" << cfg.runs << ", master_seed=" << cfg.master_seed << "\n";
    for (std::size_t p : cfg.p_values) {
        const PublishedBlock* pub = published_for(cfg.sim.mode, p);
        std::vector<std::string> headers;
        std::vector<std::array<std::string, 5>> cols;
        if (pub) {
            for (const auto& c : pub->columns) {
                headers.push_back(std::string(c.label) + "*");
                std::array<std::string, 5> v;
                for (std::size_t r = 0; r < 5; ++r) v[r] = format_fixed(c.values[r], 2);
                cols.push_back(v);
            }
        }
        for (const auto& a : res.aggregates) {
            if (a.p != p) continue;
            headers.emplace_back(to_string(a.method));
            std::array<std::string, 5> v;
            for (std::size_t r = 0; r < 5; ++r) v[r] = a.summary ? format_fixed(a.summary->mean.*members[r], 2) : "n/a";
            cols.push_back(v);
        }
        out << "\nNumber of variables p=" << p << "\n";
        out << "     ";
        for (const auto& h : headers) out << ' ' << std::string(std::max<std::size_t>(8, h.size() + 1) - h.size(), ' ') << h;
        out << '\n';
        for (std::size_t r = 0; r < 5; ++r) {
            out << row_names[r] << "  ";
            for (std::size_t c = 0; c < cols.size(); ++c) {
                const std::size_t w = std::max<std::size_t>(8, headers[c].size() + 1);
                out << ' ' << std::string(w - cols[c][r].size(), ' ') << cols[c][r];
            }
            out << '\n';
        }
        if (pub) out << "* published values, not computed\n";
    }
    return out.str();
}

std::string scatter_svg(const ExperimentConfig& cfg, const ExperimentResult& res, std::size_t p) {
    constexpr double size = 480.0, margin = 60.0;
    auto sx = [&](double tnr) { return margin + tnr * size; };
    auto sy = [&](double tpr) { return margin + (1.0 - tpr) * size; };
    std::ostringstream out;
    const double total = size + 2 * margin;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << total << "\" height=\"" << total
        << "\" viewBox=\"0 0 " << total << ' ' << total << "\">\n";
    out << "<title>" << xml_escape(std::string(to_string(cfg.sim.mode))) << " simulation, p=" << p << ", n=" << cfg.n
        << ": TPR vs TNR</title>\n";
    out << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << size << "\" height=\"" << size
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << sx(0.5) << "\" y1=\"" << margin << "\" x2=\"" << sx(0.5) << "\" y2=\"" << margin + size
        << "\" stroke=\"#bbb\" stroke-dasharray=\"4 4\"/>\n";
    out << "<line x1=\"" << margin << "\" y1=\"" << sy(0.5) << "\" x2=\"" << margin + size << "\" y2=\"" << sy(0.5)
        << "\" stroke=\"#bbb\" stroke-dasharray=\"4 4\"/>\n";
    for (int t = 0; t <= 10; t += 2) {
        const double v = t / 10.0;
        out << "<text x=\"" << sx(v) << "\" y=\"" << margin + size + 18 << "\" font-size=\"12\" text-anchor=\"middle\">"
            << format_fixed(v, 1) << "</text>\n";
        out << "<text x=\"" << margin - 8 << "\" y=\"" << sy(v) + 4 << "\" font-size=\"12\" text-anchor=\"end\">"
            << format_fixed(v, 1) << "</text>\n";
    }
    out << "<text x=\"" << margin + size / 2 << "\" y=\"" << total - 15
        << "\" font-size=\"14\" text-anchor=\"middle\">TNR</text>\n";
    out << "<text x=\"18\" y=\"" << margin + size / 2 << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << margin + size / 2 << ")\">TPR</text>\n";
    for (const auto& a : res.aggregates) {
        if (a.p != p || !a.summary) continue;
        const std::string tnr = format_fixed(a.summary->mean.tnr);
        const std::string tpr = format_fixed(a.summary->mean.tpr);
        const double x = sx(a.summary->mean.tnr), y = sy(a.summary->mean.tpr);
        out << "<g class=\"point\" data-method=\"" << xml_escape(to_string(a.method)) << "\" data-tnr=\"" << tnr
            << "\" data-tpr=\"" << tpr << "\">";
        out << "<circle cx=\"" << format_fixed(x, 2) << "\" cy=\"" << format_fixed(y, 2)
            << "\" r=\"5\" fill=\"#c0392b\"/>";
        out << "<text x=\"" << format_fixed(x + 7, 2) << "\" y=\"" << format_fixed(y - 7, 2) << "\" font-size=\"12\">"
            << xml_escape(to_string(a.method)) << "</text></g>\n";
    }
    out << "</svg>\n";
    return out.str();
}

void write_reports(const ExperimentConfig& cfg, const ExperimentResult& res) {
    const auto& dir = cfg.output_dir;
    write_text_file(dir / "runs.csv", runs_csv(cfg, res));
    write_text_file(dir / "aggregate.csv", aggregate_csv(cfg, res));
    write_text_file(dir / "table.txt", comparison_table(cfg, res));
    write_text_file(dir / "failures.log", failures_log(res));
    for (std::size_t p : cfg.p_values)
        write_text_file(dir / ("figure_p" + std::to_string(p) + ".svg"), scatter_svg(cfg, res, p));
}

} // namespace netinfer
