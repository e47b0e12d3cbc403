#include "tdms/metrics.hpp"

#include <cmath>
#include <cstdio>

namespace tdms {

PrfScores prf(const Counts& c) {
    const bool nothing_predicted = c.tp + c.fp == 0;
    const bool nothing_gold = c.tp + c.fn == 0;
    const auto tp = static_cast<double>(c.tp);
    PrfScores s;
    if (nothing_predicted) {
        s.precision = nothing_gold ? 100.0 : 0.0;
    } else {
        s.precision = 100.0 * tp / static_cast<double>(c.tp + c.fp);
    }
    if (nothing_gold) {
        s.recall = nothing_predicted ? 100.0 : 0.0;
    } else {
        s.recall = 100.0 * tp / static_cast<double>(c.tp + c.fn);
    }
    s.f1 = s.precision + s.recall == 0 ? 0.0 : 2 * s.precision * s.recall / (s.precision + s.recall);
    return s;
}

std::string format_1dp(double value) {
    // The epsilon absorbs binary representation error (58.35 is stored as
    // 58.34999...), so decimal halves round up.
    double tenths = std::floor(value * 10.0 + 0.5 + 1e-7);
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.1f", tenths / 10.0);
    return buf;
}

}  // namespace tdms
