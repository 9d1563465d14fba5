// Copyright 2026 The forecal Authors
// SPDX-License-Identifier: Apache-2.0

#include "forecal/audit.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "forecal/error.hpp"
#include "forecal/rng.hpp"

namespace forecal {

Bit FixedOutcomes::next(const Prefix& before, Forecast) {
    if (before.size() >= bits_.size()) {
        throw Error(ErrorKind::input, "outcome stream exhausted at day " +
                                          std::to_string(before.next_day()) + " (" +
                                          std::to_string(bits_.size()) + " bits available)");
    }
    return bits_[before.size()];
}

IidOutcomes::IidOutcomes(double theta, std::uint64_t key) : theta_(theta), key_(key) {
    if (!Forecast::valid(theta)) throw Error(ErrorKind::config, "theta: must lie in [0,1]");
}

Bit IidOutcomes::next(const Prefix& before, Forecast) {
    const auto k = static_cast<std::uint64_t>(before.next_day());
    return bit_from(rng::stream_uniform(key_, k) < theta_);
}

const BucketStats& CalibrationAudit::stats_for(const std::string& rule) const {
    for (std::size_t i = 0; i < rule_names.size(); ++i) {
        if (rule_names[i] == rule) return stats[i];
    }
    throw std::out_of_range("no rule named " + rule);
}

std::vector<Day> default_checkpoints(Day horizon) {
    std::vector<Day> days;
    for (Day d = 1; d < horizon; d *= 2) days.push_back(d);
    days.push_back(horizon);
    return days;
}

CalibrationAudit audit(const Forecaster& forecaster, OutcomeSource& nature,
                       std::span<const RulePtr> rules, Day horizon,
                       std::span<const Day> checkpoints, const DayObserver& observer) {
    if (horizon < 1) throw Error(ErrorKind::config, "horizon: must be >= 1");
    if (rules.empty()) throw Error(ErrorKind::config, "rules: at least one rule is required");

    std::vector<Day> schedule;
    if (checkpoints.empty()) {
        schedule = default_checkpoints(horizon);
    } else {
        for (Day d : checkpoints) {
            if (d < 1 || d > horizon || (!schedule.empty() && d <= schedule.back())) {
                throw Error(ErrorKind::config,
                            "checkpoints: must be strictly increasing days within [1, horizon]");
            }
            schedule.push_back(d);
        }
        if (schedule.back() != horizon) schedule.push_back(horizon);
    }

    CalibrationAudit result;
    result.horizon = horizon;
    result.stats.assign(rules.size(), BucketStats{});
    for (const auto& r : rules) result.rule_names.push_back(r->name());
    result.checkpoints.reserve(schedule.size() * rules.size());

    auto ev = forecaster.start();
    Prefix prefix;
    std::vector<char> selected(rules.size());
    auto next_checkpoint = schedule.begin();

    for (Day day = 1; day <= horizon; ++day) {
        const Forecast pi = Forecast::checked(ev->predict(), day);
        // Rules decide before the outcome exists.
        for (std::size_t i = 0; i < rules.size(); ++i) selected[i] = rules[i]->selects(prefix, pi);
        const Bit a = nature.next(prefix, pi);
        const double d = discrepancy(a, pi);
        for (std::size_t i = 0; i < rules.size(); ++i) {
            if (selected[i]) result.stats[i] = bucket_update(result.stats[i], d);
        }
        if (observer) observer(DayRecord{day, a, pi, d});
        prefix.push_back(a);
        ev->observe(a);

        if (day == *next_checkpoint) {
            for (std::size_t i = 0; i < rules.size(); ++i) {
                result.checkpoints.push_back(
                    {day, i, result.stats[i].count, result.stats[i].mean()});
            }
            ++next_checkpoint;
        }
    }
    return result;
}

const char* to_string(VerdictStatus status) noexcept {
    switch (status) {
        case VerdictStatus::consistent: return "consistent-with-calibration";
        case VerdictStatus::violation: return "violation";
        case VerdictStatus::insufficient_data: return "insufficient-data";
    }
    return "unknown";
}

const RuleVerdict& AuditVerdict::for_rule(const std::string& rule) const {
    for (const auto& r : rules) {
        if (r.rule == rule) return r;
    }
    throw std::out_of_range("no rule named " + rule);
}

AuditVerdict verdict(const CalibrationAudit& audit, double tolerance, std::int64_t burn_in) {
    AuditVerdict v;
    v.tolerance = tolerance;
    v.burn_in = burn_in;
    v.horizon = audit.horizon;
    for (std::size_t i = 0; i < audit.rule_names.size(); ++i) {
        RuleVerdict r;
        r.rule = audit.rule_names[i];
        r.count = audit.stats[i].count;
        r.final_mean = audit.stats[i].mean();
        for (const auto& row : audit.checkpoints) {
            if (row.rule == i && row.count >= burn_in && row.count > 0) {
                r.max_tail_abs_mean = std::max(r.max_tail_abs_mean, std::abs(row.mean));
            }
        }
        if (r.count < burn_in || r.count == 0) {
            r.status = VerdictStatus::insufficient_data;
        } else {
            r.status = r.max_tail_abs_mean >= tolerance ? VerdictStatus::violation
                                                        : VerdictStatus::consistent;
        }
        v.rules.push_back(std::move(r));
    }
    return v;
}

void write_audit_csv(std::ostream& out, const CalibrationAudit& audit) {
    out << "day,rule,count,mean\n";
    for (const auto& row : audit.checkpoints) {
        out << row.day << ',' << audit.rule_names[row.rule] << ',' << row.count << ','
            << format_real(row.mean) << '\n';
    }
}

Json verdict_to_json(const AuditVerdict& v) {
    Json rules = Json::array();
    for (const auto& r : v.rules) {
        rules.push_back({{"rule", r.rule},
                         {"count", r.count},
                         {"final_mean", r.final_mean},
                         {"max_tail_abs_mean", r.max_tail_abs_mean},
                         {"status", to_string(r.status)}});
    }
    return {{"tolerance", v.tolerance}, {"burn_in", v.burn_in}, {"horizon", v.horizon},
            {"rules", rules}};
}

}  // namespace forecal
