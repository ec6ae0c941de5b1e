#pragma once

#include <netinfer/experiment.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace netinfer {

/**
 * Parses a JSON experiment description. Recognised keys:
 *
 *   sim          {"mode", "pi", "coeff_range": [lo, hi], "sigma_range": [lo, hi],
 *                 "stabilize": bool, "spectral_target"}
 *   p_values, n, runs, methods, master_seed, output_dir, threads, max_prefix
 *   tuning       "default" | "off" | {"kstar": [...], "C": [...], "degree": [...]}
 *   svr          {"C", "epsilon", "tol"}
 *   kernels      [{"family", "kstar", "degree", "const"}, ...]
 *   lasso        {"exclude_self", "path_length", "min_ratio", "max_df_margin"}
 *
 * Missing keys keep ExperimentConfig defaults. Malformed JSON, unknown keys and
 * wrong types raise ParseError naming the line and the dotted field path.
 */
ExperimentConfig parse_experiment_config(std::string_view json_text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Serialises every field parse_experiment_config understands; parsing the result gives back `cfg`.
std::string experiment_config_json(const ExperimentConfig& cfg);

} // namespace netinfer
