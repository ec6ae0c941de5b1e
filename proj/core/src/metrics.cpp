#include <netinfer/metrics.hpp>

#include <netinfer/error.hpp>

#include <cmath>

namespace netinfer {

ConfusionCounts confusion(const Network& truth, const Network& estimate) {
    if (truth.p() != estimate.p()) throw InvalidInput("confusion: networks have different sizes");
    ConfusionCounts c;
    const std::size_t p = truth.p();
    for (std::size_t i = 0; i < p; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            const bool t = truth.edge(i, j);
            const bool e = estimate.edge(i, j);
            if (t && e) ++c.tp;
            else if (!t && e) ++c.fp;
            else if (!t && !e) ++c.tn;
            else ++c.fn;
        }
    }
    return c;
}

Rates rates(const ConfusionCounts& c) {
    Rates r;
    const auto pos = static_cast<double>(c.positives());
    const auto neg = static_cast<double>(c.negatives());
    // Complements are taken as 1 - x so that the pairs sum to exactly one.
    if (c.positives() == 0) {
        r.no_positives = true;
    } else {
        r.tpr = static_cast<double>(c.tp) / pos;
        r.fnr = 1.0 - r.tpr;
    }
    if (c.negatives() == 0) {
        r.no_negatives = true;
    } else {
        r.tnr = static_cast<double>(c.tn) / neg;
        r.fpr = 1.0 - r.tnr;
    }
    if (c.total() > 0) r.mce = static_cast<double>(c.fp + c.fn) / static_cast<double>(c.total());
    return r;
}

RateSummary aggregate(std::span<const Rates> runs) {
    if (runs.empty()) throw InvalidInput("aggregate: no runs");
    RateSummary s;
    s.count = runs.size();
    const auto n = static_cast<double>(runs.size());
    auto field = [&](double Rates::*member) {
        double sum = 0.0;
        for (const Rates& r : runs) sum += r.*member;
        const double mean = sum / n;
        double ss = 0.0;
        for (const Rates& r : runs) ss += (r.*member - mean) * (r.*member - mean);
        s.mean.*member = mean;
        s.sd.*member = runs.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    };
    field(&Rates::tpr);
    field(&Rates::fpr);
    field(&Rates::tnr);
    field(&Rates::fnr);
    field(&Rates::mce);
    return s;
}

} // namespace netinfer
