#pragma once

#include <netinfer/simulate.hpp>
#include <netinfer/timeseries.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>

namespace netinfer {

/// Shortest round-trip decimal representation.
std::string format_roundtrip(double v);
/// Fixed notation with `digits` decimals; "nan" for NaN.
std::string format_fixed(double v, int digits = 6);

/// Header `X1,...,Xp`, then one row per timepoint.
void write_series_csv(std::ostream& out, const TimeSeries& ts);
/// Accepts an optional non-numeric header row. Errors name the offending line and field.
TimeSeries read_series_csv(std::istream& in);

/// p rows of p comma-separated 0/1 values; cell (i, j) is edge i -> j.
void write_adjacency_csv(std::ostream& out, const Network& net);
Network read_adjacency_csv(std::istream& in);

/// Header `source<TAB>target`, then one 1-based edge per line, row-major order.
void write_edge_tsv(std::ostream& out, const Network& net);
Network read_edge_tsv(std::istream& in, std::size_t p);

/// JSON with seed, mode, ranges, sigma, stabilisation and transform tags.
std::string sim_metadata_json(const SimConfig& cfg, const SimOutput& out);

/// Writes series.csv, truth.csv, truth.tsv and meta.json into `dir` (created if needed).
void save_sim_output(const std::filesystem::path& dir, const SimConfig& cfg, const SimOutput& out);

/// Writes network.tsv and adjacency.csv into `dir`.
void save_network(const std::filesystem::path& dir, const Network& net);

TimeSeries load_series_csv(const std::filesystem::path& path);
Network load_adjacency_csv(const std::filesystem::path& path);

/// Writes `text` to `path`, creating parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace netinfer
