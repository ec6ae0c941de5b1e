#pragma once

#include <netinfer/timeseries.hpp>

#include <cstdint>
#include <span>

namespace netinfer {

/// Cellwise comparison over all p^2 ordered pairs, diagonal included.
struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const noexcept { return tp + fp + tn + fn; }
    std::uint64_t positives() const noexcept { return tp + fn; }
    std::uint64_t negatives() const noexcept { return tn + fp; }
};

struct Rates {
    double tpr = 0.0;
    double fpr = 0.0;
    double tnr = 0.0;
    double fnr = 0.0;
    /// (fp + fn) / total
    double mce = 0.0;
    /// tp + fn == 0: tpr and fnr were set to 0.
    bool no_positives = false;
    /// tn + fp == 0: tnr and fpr were set to 0.
    bool no_negatives = false;
};

ConfusionCounts confusion(const Network& truth, const Network& estimate);

/// 0/0 ratios are 0 and flagged.
Rates rates(const ConfusionCounts& c);

struct RateSummary {
    Rates mean;
    /// Sample standard deviation (n - 1); 0 for a single element.
    Rates sd;
    std::size_t count = 0;
};

RateSummary aggregate(std::span<const Rates> runs);

} // namespace netinfer
