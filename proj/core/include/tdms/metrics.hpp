#pragma once

#include <cstddef>
#include <string>

namespace tdms {

struct Counts {
    std::size_t tp = 0, fp = 0, fn = 0;

    Counts& operator+=(const Counts& o) {
        tp += o.tp;
        fp += o.fp;
        fn += o.fn;
        return *this;
    }
};

/// Percentages in [0, 100].
struct PrfScores {
    double precision = 0;
    double recall = 0;
    double f1 = 0;
};

/// Precision/recall/F1 in percent. A 0/0 ratio is 100 when both the predicted
/// and the gold side are empty (nothing to find, nothing claimed) and 0
/// otherwise.
PrfScores prf(const Counts& c);

/// Half-up rounding to one decimal place, e.g. 58.35 -> "58.4".
std::string format_1dp(double value);

}  // namespace tdms
