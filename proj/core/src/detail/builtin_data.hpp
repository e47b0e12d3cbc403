#pragma once

#include <string_view>

namespace tdms::builtin {

// Contents of data/aliases.tsv and data/metric_polarity.tsv, embedded at configure time.
extern const std::string_view kAliasesTsv;
extern const std::string_view kMetricPolarityTsv;

}  // namespace tdms::builtin
