#include <netinfer/timeseries.hpp>

#include <netinfer/error.hpp>

#include <algorithm>
#include <cmath>

namespace netinfer {

TimeSeries::TimeSeries(Matrix values) : values_(std::move(values)) {
    if (values_.rows() < 3) throw InvalidInput("TimeSeries: need at least 3 timepoints");
    if (values_.cols() < 1) throw InvalidInput("TimeSeries: need at least one variable");
    if (!values_.allFinite()) throw InvalidInput("TimeSeries: non-finite entry");
}

std::size_t Network::edge_count() const noexcept {
    return static_cast<std::size_t>(std::count(adj_.begin(), adj_.end(), std::uint8_t{1}));
}

std::size_t Network::in_degree(std::size_t target) const {
    std::size_t k = 0;
    for (std::size_t i = 0; i < p_; ++i) k += edge(i, target) ? 1 : 0;
    return k;
}

Network Network::complement() const {
    Network out(p_);
    for (std::size_t i = 0; i < adj_.size(); ++i) out.adj_[i] = adj_[i] ? 0 : 1;
    return out;
}

std::pair<Matrix, Standardization> standardize_columns(const Matrix& M) {
    const Eigen::Index rows = M.rows();
    const Eigen::Index cols = M.cols();
    if (rows < 2) throw InvalidInput("standardize_columns: need at least two rows");
    Standardization s;
    s.mean.resize(cols);
    s.scale.resize(cols);
    s.constant.assign(static_cast<std::size_t>(cols), false);
    Matrix out(rows, cols);

    for (Eigen::Index c = 0; c < cols; ++c) {
        const auto col = M.col(c);
        const double mean = col.mean();
        double ss = 0.0;
        for (Eigen::Index r = 0; r < rows; ++r) {
            const double d = col(r) - mean;
            ss += d * d;
        }
        const double sd = std::sqrt(ss / static_cast<double>(rows - 1));
        const bool all_equal = (col.array() == col(0)).all();
        const double magnitude = col.cwiseAbs().maxCoeff();
        s.mean(c) = mean;
        if (all_equal || !(sd > 1e-12 * magnitude)) {
            s.scale(c) = 1.0;
            s.constant[static_cast<std::size_t>(c)] = true;
            out.col(c).setZero();
        } else {
            s.scale(c) = sd;
            // Snapping to a 2^-24 grid makes the result identical for rescaled inputs,
            // which otherwise differ in the last bits and can flip near-ties downstream.
            constexpr double kGrid = 16777216.0;
            for (Eigen::Index r = 0; r < rows; ++r) out(r, c) = std::nearbyint((col(r) - mean) / sd * kGrid) / kGrid;
        }
    }
    return {std::move(out), std::move(s)};
}

LaggedPairs build_lagged_pairs(const TimeSeries& ts) {
    const Eigen::Index n = ts.values().rows();
    if (n < 3) throw InvalidInput("build_lagged_pairs: need at least 3 timepoints");
    LaggedPairs out;
    auto [X, xs] = standardize_columns(ts.values().topRows(n - 1));
    auto [Y, ys] = standardize_columns(ts.values().bottomRows(n - 1));
    out.X = std::move(X);
    out.Y = std::move(Y);
    out.x_scale = std::move(xs);
    out.y_scale = std::move(ys);
    return out;
}

} // namespace netinfer
