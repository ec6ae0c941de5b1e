#include <netinfer/io.hpp>

#include <netinfer/error.hpp>

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string_view>
#include <vector>

namespace netinfer {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(sep, start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::optional<double> parse_double(std::string_view s) {
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::string field_name(std::size_t column) { return "column " + std::to_string(column + 1); }

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path.string());
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot write " + path.string());
    return out;
}

} // namespace

std::string format_roundtrip(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string format_fixed(double v, int digits) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, digits);
    return std::string(buf, ptr);
}

void write_series_csv(std::ostream& out, const TimeSeries& ts) {
    const Matrix& v = ts.values();
    for (Eigen::Index c = 0; c < v.cols(); ++c) out << (c ? "," : "") << 'X' << (c + 1);
    out << '\n';
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
        for (Eigen::Index c = 0; c < v.cols(); ++c) out << (c ? "," : "") << format_roundtrip(v(r, c));
        out << '\n';
    }
}

TimeSeries read_series_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split(line, ',');
        std::vector<double> row;
        row.reserve(fields.size());
        bool numeric = true;
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const auto v = parse_double(fields[c]);
            if (!v) {
                if (rows.empty() && width == 0 && line_no == 1) {
                    numeric = false;
                    break;
                }
                throw ParseError("series CSV line " + std::to_string(line_no) + ", " + field_name(c) +
                                     ": not a number ('" + std::string(fields[c]) + "')",
                                 line_no, field_name(c));
            }
            row.push_back(*v);
        }
        if (!numeric) {
            width = fields.size();
            continue;
        }
        if (width == 0) width = row.size();
        if (row.size() != width)
            throw ParseError("series CSV line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                                 " fields, found " + std::to_string(row.size()),
                             line_no, field_name(std::min(row.size(), width)));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("series CSV contains no data rows", line_no);
    Matrix values(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < width; ++c) values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return TimeSeries(std::move(values));
}

void write_adjacency_csv(std::ostream& out, const Network& net) {
    for (std::size_t i = 0; i < net.p(); ++i) {
        for (std::size_t j = 0; j < net.p(); ++j) out << (j ? "," : "") << (net.edge(i, j) ? '1' : '0');
        out << '\n';
    }
}

Network read_adjacency_csv(std::istream& in) {
    std::vector<std::vector<bool>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split(line, ',');
        std::vector<bool> row;
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (fields[c] == "1") row.push_back(true);
            else if (fields[c] == "0") row.push_back(false);
            else
                throw ParseError("adjacency CSV line " + std::to_string(line_no) + ", " + field_name(c) +
                                     ": expected 0 or 1, found '" + std::string(fields[c]) + "'",
                                 line_no, field_name(c));
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw ParseError("adjacency CSV line " + std::to_string(line_no) + ": row length differs", line_no);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("adjacency CSV is empty", line_no);
    if (rows.size() != rows.front().size())
        throw ParseError("adjacency CSV is not square (" + std::to_string(rows.size()) + " rows, " +
                             std::to_string(rows.front().size()) + " columns)",
                         line_no);
    Network net(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows.size(); ++j) net.set_edge(i, j, rows[i][j]);
    return net;
}

void write_edge_tsv(std::ostream& out, const Network& net) {
    out << "source\ttarget\n";
    for (std::size_t i = 0; i < net.p(); ++i)
        for (std::size_t j = 0; j < net.p(); ++j)
            if (net.edge(i, j)) out << (i + 1) << '\t' << (j + 1) << '\n';
}

Network read_edge_tsv(std::istream& in, std::size_t p) {
    Network net(p);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split(line, '\t');
        if (line_no == 1 && !fields.empty() && fields[0] == "source") continue;
        if (fields.size() != 2) throw ParseError("edge TSV line " + std::to_string(line_no) + ": expected 2 fields", line_no);
        std::size_t idx[2];
        for (int k = 0; k < 2; ++k) {
            const auto f = fields[static_cast<std::size_t>(k)];
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), idx[k]);
            if (ec != std::errc{} || ptr != f.data() + f.size() || idx[k] < 1 || idx[k] > p)
                throw ParseError("edge TSV line " + std::to_string(line_no) + ": bad index '" + std::string(f) + "'",
                                 line_no, k == 0 ? "source" : "target");
        }
        net.set_edge(idx[0] - 1, idx[1] - 1);
    }
    return net;
}

std::string sim_metadata_json(const SimConfig& cfg, const SimOutput& out) {
    nlohmann::ordered_json j;
    j["seed"] = cfg.seed;
    j["mode"] = std::string(to_string(cfg.mode));
    j["p"] = cfg.p;
    j["n"] = cfg.n;
    j["pi"] = cfg.pi;
    j["true_edges"] = out.truth.edge_count();
    j["coeff_range"] = {cfg.coeff_min, cfg.coeff_max};
    j["sigma_range"] = {cfg.sigma_min, cfg.sigma_max};
    j["sigma"] = out.sigma;
    j["stabilize"] = cfg.stabilize_enabled();
    j["stabilize_scale"] = out.stabilize_scale;
    auto tags = nlohmann::ordered_json::array();
    for (Transform t : out.transforms) tags.push_back(std::string(to_string(t)));
    j["transforms"] = tags;
    return j.dump(2) + "\n";
}

void save_sim_output(const std::filesystem::path& dir, const SimConfig& cfg, const SimOutput& out) {
    std::filesystem::create_directories(dir);
    {
        auto f = open_output(dir / "series.csv");
        write_series_csv(f, out.series);
    }
    {
        auto f = open_output(dir / "truth.csv");
        write_adjacency_csv(f, out.truth);
    }
    {
        auto f = open_output(dir / "truth.tsv");
        write_edge_tsv(f, out.truth);
    }
    write_text_file(dir / "meta.json", sim_metadata_json(cfg, out));
}

void save_network(const std::filesystem::path& dir, const Network& net) {
    std::filesystem::create_directories(dir);
    {
        auto f = open_output(dir / "network.tsv");
        write_edge_tsv(f, net);
    }
    auto f = open_output(dir / "adjacency.csv");
    write_adjacency_csv(f, net);
}

TimeSeries load_series_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_series_csv(in);
}

Network load_adjacency_csv(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_adjacency_csv(in);
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    auto out = open_output(path);
    out << text;
}

} // namespace netinfer
