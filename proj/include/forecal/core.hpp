// Copyright 2026 The forecal Authors
// SPDX-License-Identifier: Apache-2.0

// Value types shared by every module: outcome bits, data prefixes, forecasts
// and the running (count, sum) statistics of discrepancies.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace forecal {

using Day = std::int64_t;

/// One observed outcome: one = snow, zero = no snow.
enum class Bit : std::uint8_t { zero = 0, one = 1 };

constexpr int to_int(Bit b) noexcept { return static_cast<int>(b); }
constexpr Bit bit_from(bool one) noexcept { return one ? Bit::one : Bit::zero; }

/// Finite record of the outcomes seen so far. Day k's forecast is made on the
/// prefix of length k - 1.
class Prefix {
public:
    Prefix() = default;
    explicit Prefix(std::vector<Bit> bits);

    std::size_t size() const noexcept { return bits_.size(); }
    bool empty() const noexcept { return bits_.empty(); }
    /// 1-based index of the day whose forecast this prefix feeds.
    Day next_day() const noexcept { return static_cast<Day>(bits_.size()) + 1; }

    Bit operator[](std::size_t i) const { return bits_[i]; }
    Bit back() const { return bits_.back(); }
    std::int64_t ones() const noexcept { return ones_; }

    void push_back(Bit b);
    void append(const Prefix& tail);
    /// First n bits.
    Prefix head(std::size_t n) const;
    bool starts_with(const Prefix& other) const noexcept;

    const std::vector<Bit>& bits() const noexcept { return bits_; }

    friend bool operator==(const Prefix& a, const Prefix& b) noexcept { return a.bits_ == b.bits_; }

private:
    std::vector<Bit> bits_;
    std::int64_t ones_ = 0;
};

/// Parses an ASCII '0'/'1' string. Throws Error(input) naming the offending index.
Prefix parse_prefix(std::string_view text);
std::string render_prefix(const Prefix& prefix);

/// A probability in [0,1]; never NaN or infinite.
class Forecast {
public:
    /// Throws Error(invalid_forecast) for values outside [0,1].
    explicit Forecast(double p);

    static bool valid(double p) noexcept { return p >= 0.0 && p <= 1.0; }
    /// Validates a raw forecaster output, attributing failures to `day`.
    static Forecast checked(double p, Day day);

    double value() const noexcept { return p_; }

private:
    struct Unchecked {};
    Forecast(double p, Unchecked) noexcept : p_(p) {}

    double p_;
};

/// d = a - p, in [-1, 1].
inline double discrepancy(Bit outcome, Forecast forecast) noexcept {
    return static_cast<double>(to_int(outcome)) - forecast.value();
}

/// Running statistics of the discrepancies on a selected subsequence of days.
///
/// The sum is accumulated with Neumaier's compensated summation: `partial`
/// is the plain running sum, `carry` the accumulated rounding error, and
/// `sum` their total. Over 10^5 or more days this keeps `sum` within a few
/// units in the last place of the exact value.
struct BucketStats {
    std::int64_t count = 0;
    double sum = 0.0;
    double partial = 0.0;
    double carry = 0.0;

    constexpr BucketStats() noexcept = default;
    constexpr BucketStats(std::int64_t n, double total) noexcept
        : count(n), sum(total), partial(total) {}

    bool has_mean() const noexcept { return count > 0; }
    /// Only meaningful when count > 0; returns 0 for an empty bucket.
    double mean() const noexcept { return count > 0 ? sum / static_cast<double>(count) : 0.0; }

    /// Compares the statistic itself; how the rounding error was split
    /// between `partial` and `carry` does not matter.
    friend constexpr bool operator==(const BucketStats& a, const BucketStats& b) noexcept {
        return a.count == b.count && a.sum == b.sum;
    }
};

constexpr BucketStats bucket_update(BucketStats stats, double d) noexcept {
    const double t = stats.partial + d;
    const double a = stats.partial < 0 ? -stats.partial : stats.partial;
    const double b = d < 0 ? -d : d;
    const double lost = a >= b ? (stats.partial - t) + d : (d - t) + stats.partial;
    BucketStats next(stats.count + 1, t + stats.carry + lost);
    next.partial = t;
    next.carry = stats.carry + lost;
    return next;
}

/// Formats a double with 17 significant digits ("%.17g"), the text form used
/// in every CSV output.
std::string format_real(double x);

}  // namespace forecal
