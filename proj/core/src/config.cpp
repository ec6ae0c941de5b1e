#include <netinfer/config.hpp>

#include <netinfer/error.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace netinfer {

namespace {

using nlohmann::json;

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
    offset = std::min(offset, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Best effort: line of the first occurrence of "key". 0 when absent.
std::size_t line_of_key(std::string_view text, std::string_view path) {
    const auto dot = path.rfind('.');
    std::string key = "\"" + std::string(dot == std::string_view::npos ? path : path.substr(dot + 1)) + "\"";
    if (const auto bracket = key.find('['); bracket != std::string::npos) key = key.substr(0, bracket) + "\"";
    const auto pos = text.find(key);
    return pos == std::string_view::npos ? 0 : line_of_offset(text, pos);
}

class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    [[noreturn]] void fail(const std::string& path, const std::string& msg) const {
        const std::size_t line = line_of_key(text_, path);
        std::string what = "config";
        if (line) what += " line " + std::to_string(line);
        what += ", field '" + path + "': " + msg;
        throw ParseError(what, line, path);
    }

    void check_keys(const json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) const {
        if (!obj.is_object()) fail(path.empty() ? "<root>" : path, "expected an object");
        for (const auto& [key, value] : obj.items()) {
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
                fail(join(path, key), "unknown key");
        }
    }

    static std::string join(const std::string& path, std::string_view key) {
        return path.empty() ? std::string(key) : path + "." + std::string(key);
    }

    double number(const json& v, const std::string& path) const {
        if (!v.is_number()) fail(path, "expected a number");
        return v.get<double>();
    }

    std::uint64_t unsigned_int(const json& v, const std::string& path) const {
        if (!v.is_number_unsigned()) fail(path, "expected a nonnegative integer");
        return v.get<std::uint64_t>();
    }

    int integer(const json& v, const std::string& path) const {
        if (!v.is_number_integer()) fail(path, "expected an integer");
        return v.get<int>();
    }

    bool boolean(const json& v, const std::string& path) const {
        if (!v.is_boolean()) fail(path, "expected true or false");
        return v.get<bool>();
    }

    std::string string(const json& v, const std::string& path) const {
        if (!v.is_string()) fail(path, "expected a string");
        return v.get<std::string>();
    }

    const json& array(const json& v, const std::string& path) const {
        if (!v.is_array()) fail(path, "expected an array");
        return v;
    }

    std::pair<double, double> range(const json& v, const std::string& path) const {
        if (!v.is_array() || v.size() != 2) fail(path, "expected [low, high]");
        return {number(v[0], path + "[0]"), number(v[1], path + "[1]")};
    }

    std::vector<double> numbers(const json& v, const std::string& path) const {
        std::vector<double> out;
        for (std::size_t i = 0; i < array(v, path).size(); ++i) out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
        return out;
    }

    KernelSpec kernel(const json& v, const std::string& path) const {
        check_keys(v, path, {"family", "kstar", "degree", "const"});
        if (!v.contains("family")) fail(path + ".family", "missing");
        KernelSpec k;
        try {
            k.family = parse_kernel_family(string(v["family"], path + ".family"));
        } catch (const InvalidInput& e) {
            fail(path + ".family", e.what());
        }
        // kstar <= 0 asks for the 1/p default.
        k.kstar = v.contains("kstar") ? number(v["kstar"], path + ".kstar") : 0.0;
        if (v.contains("degree")) k.degree = integer(v["degree"], path + ".degree");
        k.constant = v.contains("const") ? number(v["const"], path + ".const")
                                         : (k.family == KernelFamily::Polynomial ? 1.0 : 0.0);
        return k;
    }

private:
    std::string_view text_;
};

} // namespace

ExperimentConfig parse_experiment_config(std::string_view text) {
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const std::size_t line = line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ParseError("config line " + std::to_string(line) + ": malformed JSON (" + e.what() + ")", line);
    }
    const Reader r(text);
    r.check_keys(root, "", {"sim", "p_values", "n", "runs", "methods", "tuning", "master_seed", "output_dir", "threads",
                            "svr", "kernels", "max_prefix", "lasso"});

    ExperimentConfig cfg;
    if (root.contains("sim")) {
        const json& s = root["sim"];
        r.check_keys(s, "sim", {"mode", "pi", "coeff_range", "sigma_range", "stabilize", "spectral_target"});
        if (s.contains("mode")) {
            try {
                cfg.sim.mode = parse_sim_mode(r.string(s["mode"], "sim.mode"));
            } catch (const InvalidInput& e) {
                r.fail("sim.mode", e.what());
            }
        }
        if (s.contains("pi")) cfg.sim.pi = r.number(s["pi"], "sim.pi");
        if (s.contains("coeff_range")) std::tie(cfg.sim.coeff_min, cfg.sim.coeff_max) = r.range(s["coeff_range"], "sim.coeff_range");
        if (s.contains("sigma_range")) std::tie(cfg.sim.sigma_min, cfg.sim.sigma_max) = r.range(s["sigma_range"], "sim.sigma_range");
        if (s.contains("stabilize")) cfg.sim.stabilize = r.boolean(s["stabilize"], "sim.stabilize");
        if (s.contains("spectral_target")) cfg.sim.spectral_target = r.number(s["spectral_target"], "sim.spectral_target");
    }
    if (root.contains("p_values")) {
        cfg.p_values.clear();
        const json& a = r.array(root["p_values"], "p_values");
        for (std::size_t i = 0; i < a.size(); ++i)
            cfg.p_values.push_back(r.unsigned_int(a[i], "p_values[" + std::to_string(i) + "]"));
    }
    if (root.contains("n")) cfg.n = r.unsigned_int(root["n"], "n");
    if (root.contains("runs")) cfg.runs = r.unsigned_int(root["runs"], "runs");
    if (root.contains("methods")) {
        cfg.methods.clear();
        const json& a = r.array(root["methods"], "methods");
        for (std::size_t i = 0; i < a.size(); ++i) {
            const std::string path = "methods[" + std::to_string(i) + "]";
            try {
                cfg.methods.push_back(parse_method(r.string(a[i], path)));
            } catch (const InvalidInput& e) {
                r.fail(path, e.what());
            }
        }
    }
    if (root.contains("tuning")) {
        const json& t = root["tuning"];
        if (t.is_string()) {
            const std::string v = t.get<std::string>();
            if (v == "default") {
                cfg.settings.tune = true;
                cfg.settings.grid = TuningGrid::defaults();
            } else if (v == "off") {
                cfg.settings.tune = false;
            } else {
                r.fail("tuning", "expected \"default\", \"off\" or a grid object");
            }
        } else {
            r.check_keys(t, "tuning", {"kstar", "C", "degree"});
            cfg.settings.tune = true;
            if (t.contains("kstar")) cfg.settings.grid.kstar_values = r.numbers(t["kstar"], "tuning.kstar");
            if (t.contains("C")) cfg.settings.grid.C_values = r.numbers(t["C"], "tuning.C");
            if (t.contains("degree")) {
                cfg.settings.grid.degrees.clear();
                const json& a = r.array(t["degree"], "tuning.degree");
                for (std::size_t i = 0; i < a.size(); ++i)
                    cfg.settings.grid.degrees.push_back(r.integer(a[i], "tuning.degree[" + std::to_string(i) + "]"));
            }
        }
    }
    if (root.contains("master_seed")) cfg.master_seed = r.unsigned_int(root["master_seed"], "master_seed");
    if (root.contains("output_dir")) cfg.output_dir = r.string(root["output_dir"], "output_dir");
    if (root.contains("threads")) cfg.threads = r.unsigned_int(root["threads"], "threads");
    if (root.contains("max_prefix")) cfg.settings.max_prefix = r.unsigned_int(root["max_prefix"], "max_prefix");
    if (root.contains("svr")) {
        const json& s = root["svr"];
        r.check_keys(s, "svr", {"C", "epsilon", "tol"});
        if (s.contains("C")) cfg.settings.svr.C = r.number(s["C"], "svr.C");
        if (s.contains("epsilon")) cfg.settings.svr.epsilon = r.number(s["epsilon"], "svr.epsilon");
        if (s.contains("tol")) cfg.settings.svr.tol = r.number(s["tol"], "svr.tol");
    }
    if (root.contains("kernels")) {
        const json& a = r.array(root["kernels"], "kernels");
        for (std::size_t i = 0; i < a.size(); ++i) cfg.settings.kernels.push_back(r.kernel(a[i], "kernels[" + std::to_string(i) + "]"));
    }
    if (root.contains("lasso")) {
        const json& l = root["lasso"];
        r.check_keys(l, "lasso", {"exclude_self", "path_length", "min_ratio", "max_df_margin"});
        if (l.contains("exclude_self")) cfg.settings.lasso.exclude_self = r.boolean(l["exclude_self"], "lasso.exclude_self");
        if (l.contains("path_length")) cfg.settings.lasso.path_length = r.unsigned_int(l["path_length"], "lasso.path_length");
        if (l.contains("min_ratio")) cfg.settings.lasso.min_ratio = r.number(l["min_ratio"], "lasso.min_ratio");
        if (l.contains("max_df_margin")) cfg.settings.lasso.max_df_margin = r.unsigned_int(l["max_df_margin"], "lasso.max_df_margin");
    }

    try {
        cfg.validate();
    } catch (const InvalidInput& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_experiment_config(buf.str());
}

std::string experiment_config_json(const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    auto& sim = j["sim"];
    sim["mode"] = std::string(to_string(cfg.sim.mode));
    sim["pi"] = cfg.sim.pi;
    sim["coeff_range"] = {cfg.sim.coeff_min, cfg.sim.coeff_max};
    sim["sigma_range"] = {cfg.sim.sigma_min, cfg.sim.sigma_max};
    if (cfg.sim.stabilize) sim["stabilize"] = *cfg.sim.stabilize;
    sim["spectral_target"] = cfg.sim.spectral_target;
    j["p_values"] = cfg.p_values;
    j["n"] = cfg.n;
    j["runs"] = cfg.runs;
    auto methods = nlohmann::ordered_json::array();
    for (Method m : cfg.methods) methods.push_back(std::string(to_string(m)));
    j["methods"] = methods;
    if (cfg.settings.tune) {
        j["tuning"] = {{"kstar", cfg.settings.grid.kstar_values},
                       {"C", cfg.settings.grid.C_values},
                       {"degree", cfg.settings.grid.degrees}};
    } else {
        j["tuning"] = "off";
    }
    j["master_seed"] = cfg.master_seed;
    j["output_dir"] = cfg.output_dir.string();
    j["threads"] = cfg.threads;
    j["max_prefix"] = cfg.settings.max_prefix;
    j["svr"] = {{"C", cfg.settings.svr.C}, {"epsilon", cfg.settings.svr.epsilon}, {"tol", cfg.settings.svr.tol}};
    auto kernels = nlohmann::ordered_json::array();
    for (const KernelSpec& k : cfg.settings.kernels)
        kernels.push_back({{"family", std::string(to_string(k.family))},
                           {"kstar", k.kstar},
                           {"degree", k.degree},
                           {"const", k.constant}});
    j["kernels"] = kernels;
    j["lasso"] = {{"exclude_self", cfg.settings.lasso.exclude_self},
                  {"path_length", cfg.settings.lasso.path_length},
                  {"min_ratio", cfg.settings.lasso.min_ratio},
                  {"max_df_margin", cfg.settings.lasso.max_df_margin}};
    return j.dump(2) + "\n";
}

} // namespace netinfer
