#include "support.hpp"

#include <netinfer/error.hpp>
#include <netinfer/experiment.hpp>
#include <netinfer/io.hpp>

#include <doctest.h>

#include <fstream>
#include <regex>
#include <sstream>

using namespace netinfer;

namespace {

ExperimentConfig smoke() {
    ExperimentConfig cfg;
    cfg.p_values = {8};
    cfg.n = 20;
    cfg.runs = 3;
    cfg.methods = {Method::Nlasso};
    return cfg;
}

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

} // namespace

TEST_SUITE("experiment") {

TEST_CASE("method names") {
    for (Method m : {Method::NsvmLinear, Method::NsvmRbf, Method::NsvmSigmoid, Method::NsvmPoly, Method::Rbn,
                     Method::Nlasso})
        CHECK(parse_method(to_string(m)) == m);
    CHECK(kernel_label(Method::NsvmSigmoid) == "sigmoid");
    CHECK(kernel_label(Method::Rbn) == "none");
    CHECK_THROWS_AS(parse_method("nsvm"), InvalidInput);
}

TEST_CASE("smoke config emits three run rows and one aggregate row") {
    const ExperimentConfig cfg = smoke();
    const ExperimentResult res = run_experiment(cfg);
    CHECK(res.records.size() == 3);
    CHECK(res.aggregates.size() == 1);
    CHECK(res.failures.empty());
    CHECK(line_count(runs_csv(cfg, res)) == 4);
    CHECK(line_count(aggregate_csv(cfg, res)) == 2);
    CHECK_FALSE(res.total_method_failure());
}

TEST_CASE("row counts scale with methods, sizes and runs") {
    ExperimentConfig cfg = smoke();
    cfg.p_values = {6, 9};
    cfg.runs = 2;
    cfg.methods = {Method::Rbn, Method::Nlasso};
    const ExperimentResult res = run_experiment(cfg);
    CHECK(res.records.size() + res.failures.size() == 8);
    CHECK(res.aggregates.size() == 4);
    // Canonical order: method, then p, then run.
    for (std::size_t k = 1; k < res.records.size(); ++k) {
        const auto& a = res.records[k - 1];
        const auto& b = res.records[k];
        const auto key = [&](const RunRecord& r) {
            return std::tuple(r.method == Method::Rbn ? 0 : 1, r.p == 6 ? 0 : 1, r.run);
        };
        CHECK(key(a) < key(b));
    }
}

TEST_CASE("results do not depend on the worker count") {
    ExperimentConfig cfg = smoke();
    cfg.methods = {Method::Nlasso, Method::Rbn, Method::NsvmLinear};
    cfg.settings.tune = false;
    cfg.threads = 1;
    const ExperimentResult a = run_experiment(cfg);
    cfg.threads = 8;
    const ExperimentResult b = run_experiment(cfg);
    CHECK(runs_csv(cfg, a) == runs_csv(cfg, b));
    CHECK(aggregate_csv(cfg, a) == aggregate_csv(cfg, b));
}

TEST_CASE("every run failing is a total method failure") {
    ExperimentConfig cfg = smoke();
    cfg.n = 4;  // too short for the structure search
    cfg.methods = {Method::Rbn, Method::Nlasso};
    const ExperimentResult res = run_experiment(cfg);
    CHECK(res.failures.size() == 3);
    CHECK(res.total_method_failure());
    CHECK_FALSE(res.aggregates[0].summary.has_value());
    const std::string agg = aggregate_csv(cfg, res);
    CHECK(agg.find("rbn,none,8,4,0.05,0,nan") != std::string::npos);
    CHECK(line_count(failures_log(res)) == 3);
}

TEST_CASE("figure points carry the aggregate coordinates exactly") {
    ExperimentConfig cfg = smoke();
    cfg.methods = {Method::Nlasso, Method::Rbn};
    const ExperimentResult res = run_experiment(cfg);
    const std::string svg = scatter_svg(cfg, res, 8);
    const std::string agg = aggregate_csv(cfg, res);
    std::istringstream rows(agg);
    std::string line;
    std::getline(rows, line);
    std::size_t matched = 0;
    while (std::getline(rows, line)) {
        std::vector<std::string> f;
        std::stringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
        const std::string tag = "data-method=\"" + f[0] + "\" data-tnr=\"" + f[10] + "\" data-tpr=\"" + f[6] + "\"";
        CHECK(svg.find(tag) != std::string::npos);
        ++matched;
    }
    CHECK(matched == 2);
    CHECK(svg.rfind("<svg", 0) == 0);
}

TEST_CASE("comparison table labels published reference columns") {
    ExperimentConfig cfg = smoke();
    cfg.p_values = {50};
    ExperimentResult res;
    res.aggregates.push_back({Method::Nlasso, 50, std::nullopt});
    const std::string t = comparison_table(cfg, res);
    CHECK(t.find("G1-S1*") != std::string::npos);
    CHECK(t.find("Genenet*") != std::string::npos);
    CHECK(t.find("published values, not computed") != std::string::npos);
    CHECK(t.find("n/a") != std::string::npos);
    cfg.p_values = {8};
    res.aggregates[0].p = 8;
    CHECK(comparison_table(cfg, res).find("published") == std::string::npos);
}

TEST_CASE("report files") {
    ExperimentConfig cfg = smoke();
    cfg.output_dir = test::scratch_dir("reports");
    const ExperimentResult res = run_experiment(cfg);
    write_reports(cfg, res);
    for (const char* f : {"runs.csv", "aggregate.csv", "table.txt", "failures.log", "figure_p8.svg"})
        CHECK(std::filesystem::exists(cfg.output_dir / f));
}

TEST_CASE("identical configs give byte-identical CSVs") {
    const ExperimentConfig cfg = smoke();
    CHECK(runs_csv(cfg, run_experiment(cfg)) == runs_csv(cfg, run_experiment(cfg)));
}

TEST_CASE("validation") {
    ExperimentConfig cfg = smoke();
    cfg.runs = 0;
    CHECK_THROWS_AS(cfg.validate(), InvalidInput);
    cfg = smoke();
    cfg.methods.clear();
    CHECK_THROWS_AS(cfg.validate(), InvalidInput);
    cfg = smoke();
    cfg.p_values = {1};
    CHECK_THROWS_AS(cfg.validate(), InvalidInput);
}

}
