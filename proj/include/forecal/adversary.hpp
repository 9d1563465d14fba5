// Copyright 2026 The forecal Authors
// SPDX-License-Identifier: Apache-2.0

// Natures that defeat high-low calibration.
//
// The pointwise adversary makes day k snowy iff the forecast is below 0.5, so
// every low day has discrepancy 1 - p > 0.5 and every high day has
// discrepancy -p <= -0.5.
//
// The Banach-Mazur player-2 turn plays the same bits but stops at the first
// bit after which the low bucket mean is >= 0.25 or the high bucket mean is
// <= -0.25. Starting from a prefix of length k0 the turn ends within 3*k0 + 1
// bits: old low discrepancies exceed -0.5 and new ones exceed 0.5, so 3*L0 new
// low days lift the low mean past 0.25; likewise 3*H0 new high days for the
// high side, and a + b >= 3*L0 + 3*H0 - 1 forces one of the two.

#pragma once

#include <cstdint>
#include <optional>

#include "forecal/audit.hpp"
#include "forecal/core.hpp"
#include "forecal/forecasters.hpp"

namespace forecal {

/// 1 iff forecast < 0.5.
inline Bit oakes_dawid_bit(Forecast forecast) noexcept {
    return bit_from(forecast.value() < 0.5);
}

class AdversarialOutcomes final : public OutcomeSource {
public:
    Bit next(const Prefix&, Forecast forecast) override { return oakes_dawid_bit(forecast); }
};

/// The forecaster's own adversarial sequence of length `horizon`.
Prefix adversarial_stream(const Forecaster& forecaster, Day horizon);

struct HighLowStats {
    BucketStats high;
    BucketStats low;

    friend bool operator==(const HighLowStats&, const HighLowStats&) = default;
};

/// Folds one day into the bucket its forecast belongs to (high iff p >= 0.5).
HighLowStats fold_day(HighLowStats stats, Forecast forecast, Bit outcome) noexcept;

/// Recomputes the high/low statistics of `forecaster` along `prefix`.
HighLowStats high_low_stats(const Forecaster& forecaster, const Prefix& prefix);

enum class StopCondition { low_mean_high, high_mean_low };

/// "low_mean>=0.25" or "high_mean<=-0.25".
const char* to_string(StopCondition c) noexcept;

inline constexpr double stop_margin = 0.25;

/// The condition satisfied by `stats`, if any; the low side is checked first.
/// Empty buckets never satisfy a condition.
std::optional<StopCondition> stop_condition(const HighLowStats& stats) noexcept;

struct TurnOutcome {
    Prefix extension;
    StopCondition condition;
    HighLowStats stats_after;
    std::int64_t bits_used = 0;
};

/// 3 * k0 + 1.
constexpr std::int64_t termination_bound(std::int64_t prefix_length) noexcept {
    return 3 * prefix_length + 1;
}

/// Plays one player-2 turn from the state `ev` is positioned at, advancing
/// `ev` through the extension. `stats` must be the true high/low statistics
/// of that prefix. Throws Error(cap_exceeded) if `cap` bits do not suffice.
TurnOutcome player2_turn(Evaluator& ev, HighLowStats stats, std::int64_t cap);

/// Same, starting from an explicit prefix. With `verify_stats` the supplied
/// statistics are recomputed from the prefix and must match exactly.
TurnOutcome player2_turn(const Forecaster& forecaster, const Prefix& current, HighLowStats stats,
                         std::int64_t cap, bool verify_stats = false);

}  // namespace forecal
