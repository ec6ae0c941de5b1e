#pragma once

#include <netinfer/types.hpp>

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace netinfer {

/// Observed process; row t holds X(t+1) in 1-based time, one column per variable.
class TimeSeries {
public:
    TimeSeries() = default;
    /// Throws InvalidInput unless n >= 3, p >= 1 and every entry is finite.
    explicit TimeSeries(Matrix values);

    const Matrix& values() const noexcept { return values_; }
    std::size_t n() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    std::size_t p() const noexcept { return static_cast<std::size_t>(values_.cols()); }

private:
    Matrix values_;
};

/// Directed network over p variables: edge(i, j) means X_i(t) -> X_j(t+1).
class Network {
public:
    Network() = default;
    explicit Network(std::size_t p) : p_(p), adj_(p * p, 0) {}

    std::size_t p() const noexcept { return p_; }
    bool edge(std::size_t source, std::size_t target) const { return adj_.at(source * p_ + target) != 0; }
    void set_edge(std::size_t source, std::size_t target, bool present = true) {
        adj_.at(source * p_ + target) = present ? 1 : 0;
    }
    std::size_t edge_count() const noexcept;
    std::size_t in_degree(std::size_t target) const;
    /// Every cell flipped, diagonal included.
    Network complement() const;

    friend bool operator==(const Network&, const Network&) = default;

private:
    std::size_t p_ = 0;
    std::vector<std::uint8_t> adj_;
};

/// Column means and standard deviations used to standardise a matrix.
struct Standardization {
    Vector mean;
    Vector scale;
    /// Columns whose values are all equal; standardised to zeros.
    std::vector<bool> constant;
};

/**
 * Centres each column and divides by its sample standard deviation (n - 1).
 * Columns whose entries are all equal, or whose spread is below 1e-12 of their
 * magnitude, come out as exact zeros.
 */
std::pair<Matrix, Standardization> standardize_columns(const Matrix& M);

/// Regression design for t -> t+1 transitions.
struct LaggedPairs {
    /// Row t is X(t), standardised, t = 1..n-1.
    Matrix X;
    /// Row t is X(t+1), each column standardised independently.
    Matrix Y;
    Standardization x_scale;
    Standardization y_scale;
};

LaggedPairs build_lagged_pairs(const TimeSeries& ts);

} // namespace netinfer
