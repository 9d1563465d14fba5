// Copyright 2026 The forecal Authors
// SPDX-License-Identifier: Apache-2.0

#include "forecal/adversary.hpp"

#include "forecal/error.hpp"

namespace forecal {

Prefix adversarial_stream(const Forecaster& forecaster, Day horizon) {
    if (horizon < 1) throw Error(ErrorKind::config, "horizon: must be >= 1");
    auto ev = forecaster.start();
    Prefix out;
    for (Day day = 1; day <= horizon; ++day) {
        const Bit b = oakes_dawid_bit(Forecast::checked(ev->predict(), day));
        out.push_back(b);
        ev->observe(b);
    }
    return out;
}

HighLowStats fold_day(HighLowStats stats, Forecast forecast, Bit outcome) noexcept {
    const double d = discrepancy(outcome, forecast);
    if (forecast.value() >= 0.5) {
        stats.high = bucket_update(stats.high, d);
    } else {
        stats.low = bucket_update(stats.low, d);
    }
    return stats;
}

HighLowStats high_low_stats(const Forecaster& forecaster, const Prefix& prefix) {
    auto ev = forecaster.start();
    HighLowStats stats;
    for (Bit b : prefix.bits()) {
        stats = fold_day(stats, Forecast::checked(ev->predict(), ev->next_day()), b);
        ev->observe(b);
    }
    return stats;
}

const char* to_string(StopCondition c) noexcept {
    return c == StopCondition::low_mean_high ? "low_mean>=0.25" : "high_mean<=-0.25";
}

std::optional<StopCondition> stop_condition(const HighLowStats& stats) noexcept {
    if (stats.low.count > 0 && stats.low.mean() >= stop_margin) {
        return StopCondition::low_mean_high;
    }
    if (stats.high.count > 0 && stats.high.mean() <= -stop_margin) {
        return StopCondition::high_mean_low;
    }
    return std::nullopt;
}

TurnOutcome player2_turn(Evaluator& ev, HighLowStats stats, std::int64_t cap) {
    TurnOutcome turn;
    while (turn.bits_used < cap) {
        const Forecast pi = Forecast::checked(ev.predict(), ev.next_day());
        const Bit b = oakes_dawid_bit(pi);
        stats = fold_day(stats, pi, b);
        ev.observe(b);
        turn.extension.push_back(b);
        ++turn.bits_used;
        if (auto c = stop_condition(stats)) {
            turn.condition = *c;
            turn.stats_after = stats;
            return turn;
        }
    }
    throw Error(ErrorKind::cap_exceeded,
                "termination bound violated: player-2 turn from day " +
                    std::to_string(ev.next_day() - turn.bits_used) + " used " +
                    std::to_string(cap) + " bits without meeting a stopping condition");
}

TurnOutcome player2_turn(const Forecaster& forecaster, const Prefix& current, HighLowStats stats,
                         std::int64_t cap, bool verify_stats) {
    if (verify_stats && high_low_stats(forecaster, current) != stats) {
        throw Error(ErrorKind::input, "player-2 turn: supplied statistics do not match the prefix");
    }
    auto ev = forecaster.start_at(current);
    return player2_turn(*ev, stats, cap);
}

}  // namespace forecal
