#include "tdms/decimal.hpp"

#include <cstdlib>
#include <limits>

namespace tdms {

namespace {

constexpr std::int64_t kMaxMantissa = std::numeric_limits<std::int64_t>::max() / 10;

// Compare a*10^-sa with b*10^-sb exactly, falling back to long double when
// aligning the scales would overflow.
int compare(std::int64_t a, int sa, std::int64_t b, int sb) {
    __int128 x = a, y = b;
    int diff = sa - sb;
    if (diff > 0 && diff < 30) {
        for (int i = 0; i < diff; ++i) y *= 10;
    } else if (diff < 0 && diff > -30) {
        for (int i = 0; i < -diff; ++i) x *= 10;
    } else if (diff != 0) {
        long double lx = static_cast<long double>(a), ly = static_cast<long double>(b);
        for (int i = 0; i < sa; ++i) lx /= 10;
        for (int i = 0; i < sb; ++i) ly /= 10;
        return lx < ly ? -1 : (lx > ly ? 1 : 0);
    }
    return x < y ? -1 : (x > y ? 1 : 0);
}

}  // namespace

std::optional<Decimal> Decimal::parse(std::string_view s) {
    std::size_t i = 0;
    bool negative = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        negative = s[i] == '-';
        ++i;
    }
    std::int64_t mantissa = 0;
    int scale = 0;
    bool seen_digit = false, seen_point = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c >= '0' && c <= '9') {
            if (mantissa > kMaxMantissa) return std::nullopt;
            mantissa = mantissa * 10 + (c - '0');
            if (seen_point) ++scale;
            seen_digit = true;
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            return std::nullopt;
        }
    }
    if (!seen_digit) return std::nullopt;
    return Decimal(negative ? -mantissa : mantissa, scale);
}

double Decimal::to_double() const noexcept {
    return std::strtod(to_string().c_str(), nullptr);
}

std::string Decimal::to_string() const {
    std::int64_t m = mantissa_;
    bool negative = m < 0;
    std::uint64_t magnitude = negative ? static_cast<std::uint64_t>(-(m + 1)) + 1 : static_cast<std::uint64_t>(m);
    std::string digits = std::to_string(magnitude);
    if (scale_ > 0) {
        if (static_cast<int>(digits.size()) <= scale_) {
            digits.insert(0, static_cast<std::size_t>(scale_ + 1 - static_cast<int>(digits.size())), '0');
        }
        digits.insert(digits.size() - static_cast<std::size_t>(scale_), ".");
    } else if (scale_ < 0) {
        digits.append(static_cast<std::size_t>(-scale_), '0');
    }
    return negative ? "-" + digits : digits;
}

Decimal Decimal::normalized() const noexcept {
    std::int64_t m = mantissa_;
    int s = scale_;
    while (s > 0 && m % 10 == 0) {
        m /= 10;
        --s;
    }
    if (m == 0) s = 0;
    return Decimal(m, s);
}

Decimal Decimal::scaled_by_pow10(int k) const noexcept {
    int s = scale_ - k;
    std::int64_t m = mantissa_;
    while (s < 0) {
        m *= 10;
        ++s;
    }
    return Decimal(m, s);
}

bool operator==(const Decimal& a, const Decimal& b) noexcept {
    return compare(a.mantissa_, a.scale_, b.mantissa_, b.scale_) == 0;
}

std::strong_ordering operator<=>(const Decimal& a, const Decimal& b) noexcept {
    int c = compare(a.mantissa_, a.scale_, b.mantissa_, b.scale_);
    return c < 0 ? std::strong_ordering::less : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

}  // namespace tdms
