#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace tdms {

/// Exact base-10 number as written in a paper: `mantissa * 10^-scale`.
/// The written scale is kept so "85.60" prints back as "85.60", while
/// equality ignores trailing zeros (85.6 == 85.60).
class Decimal {
public:
    constexpr Decimal() = default;
    constexpr Decimal(std::int64_t mantissa, int scale) : mantissa_(mantissa), scale_(scale) {}

    /// Parses `[+-]digits[.digits]` (also `.5`, `5.`). No exponent, no
    /// surrounding whitespace. Returns nullopt on anything else or overflow.
    static std::optional<Decimal> parse(std::string_view s);

    std::int64_t mantissa() const noexcept { return mantissa_; }
    int scale() const noexcept { return scale_; }

    double to_double() const noexcept;
    std::string to_string() const;

    /// Same value with trailing fractional zeros removed.
    Decimal normalized() const noexcept;

    /// Multiply by 10^k exactly (shifts the scale).
    Decimal scaled_by_pow10(int k) const noexcept;

    friend bool operator==(const Decimal& a, const Decimal& b) noexcept;
    friend std::strong_ordering operator<=>(const Decimal& a, const Decimal& b) noexcept;

private:
    std::int64_t mantissa_ = 0;
    int scale_ = 0;
};

}  // namespace tdms
