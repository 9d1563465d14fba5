// Copyright 2026 The forecal Authors
// SPDX-License-Identifier: Apache-2.0

// Calibration auditing: run a forecaster against a source of outcomes and
// accumulate, for each selection rule, the discrepancies of the days it
// selects.

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "forecal/core.hpp"
#include "forecal/forecasters.hpp"
#include "forecal/selection.hpp"

namespace forecal {

/// Nature. The outcome of day k may depend on the first k-1 outcomes and on
/// the day-k forecast, which is what an adaptive adversary needs.
class OutcomeSource {
public:
    virtual ~OutcomeSource() = default;
    virtual Bit next(const Prefix& before, Forecast forecast) = 0;
};

/// Replays a fixed bit string; running past its end is an input error.
class FixedOutcomes final : public OutcomeSource {
public:
    explicit FixedOutcomes(Prefix bits) : bits_(std::move(bits)) {}
    Bit next(const Prefix& before, Forecast forecast) override;

private:
    Prefix bits_;
};

/// Independent Bernoulli(theta) outcomes: day k is 1 iff u_k < theta for the
/// k-th uniform of stream `key`.
class IidOutcomes final : public OutcomeSource {
public:
    IidOutcomes(double theta, std::uint64_t key);
    Bit next(const Prefix& before, Forecast forecast) override;

private:
    double theta_;
    std::uint64_t key_;
};

struct DayRecord {
    Day day;
    Bit outcome;
    Forecast forecast;
    double discrepancy;
};

using DayObserver = std::function<void(const DayRecord&)>;

struct CheckpointRow {
    Day day;
    std::size_t rule;  // index into CalibrationAudit::rule_names
    std::int64_t count;
    double mean;       // 0 when count == 0
};

struct CalibrationAudit {
    Day horizon = 0;
    std::vector<std::string> rule_names;
    std::vector<BucketStats> stats;  // final, one per rule
    std::vector<CheckpointRow> checkpoints;

    /// Final statistics of the named rule; throws std::out_of_range if absent.
    const BucketStats& stats_for(const std::string& rule) const;
};

/// Powers of two up to the horizon, followed by the horizon itself.
std::vector<Day> default_checkpoints(Day horizon);

/// Audits `horizon` days. The forecaster is queried once per day through a
/// fresh evaluator; checkpoints (strictly increasing, within [1, horizon])
/// default to default_checkpoints(horizon), and the horizon is always a
/// checkpoint. Throws Error(invalid_forecast) naming the day on a bad
/// forecast, and propagates errors from the outcome source.
CalibrationAudit audit(const Forecaster& forecaster, OutcomeSource& nature,
                       std::span<const RulePtr> rules, Day horizon,
                       std::span<const Day> checkpoints = {}, const DayObserver& observer = {});

enum class VerdictStatus { consistent, violation, insufficient_data };

const char* to_string(VerdictStatus status) noexcept;

struct RuleVerdict {
    std::string rule;
    std::int64_t count = 0;
    double final_mean = 0.0;
    double max_tail_abs_mean = 0.0;  // over checkpoints with count >= burn_in
    VerdictStatus status = VerdictStatus::insufficient_data;
};

struct AuditVerdict {
    double tolerance = 0.0;
    std::int64_t burn_in = 0;
    Day horizon = 0;
    std::vector<RuleVerdict> rules;

    const RuleVerdict& for_rule(const std::string& rule) const;
};

inline constexpr std::int64_t default_burn_in = 100;

AuditVerdict verdict(const CalibrationAudit& audit, double tolerance,
                     std::int64_t burn_in = default_burn_in);

/// CSV with header day,rule,count,mean; LF endings, 17 significant digits.
void write_audit_csv(std::ostream& out, const CalibrationAudit& audit);
Json verdict_to_json(const AuditVerdict& v);

}  // namespace forecal
