// Copyright 2026 The forecal Authors
// SPDX-License-Identifier: Apache-2.0

// Selection rules pick out a subsequence of days. The decision for day k sees
// only the first k-1 outcomes and the day-k forecast; the interface has no
// way to pass anything else.

#pragma once

#include <memory>
#include <string>
#include <vector>

#include "forecal/core.hpp"
#include "forecal/json_fields.hpp"

namespace forecal {

class SelectionRule {
public:
    virtual ~SelectionRule() = default;

    virtual bool selects(const Prefix& before_day, Forecast forecast) const = 0;
    virtual std::string name() const = 0;
    virtual Json descriptor() const = 0;
};

using RulePtr = std::shared_ptr<const SelectionRule>;

/// forecast >= 0.5 (ties go high).
RulePtr high_rule();
/// forecast < 0.5.
RulePtr low_rule();
/// lo <= forecast < hi; hi may be up to nextafter(1, 2) so that forecast 1 can be included.
RulePtr band_rule(double lo, double hi);
/// day index k = r (mod m).
RulePtr parity_rule(std::int64_t m, std::int64_t r);
/// previous day's outcome equals b; never selects day 1.
RulePtr prev_bit_rule(Bit b);
RulePtr all_days_rule();

/// Accepts "all", "high", "low" or an object such as
/// {"type":"band","lo":0.9,"hi":1.0000000000000002}, {"type":"parity","m":2,"r":0},
/// {"type":"prev_bit","bit":1}.
RulePtr rule_from_json(const Json& j, const std::string& path = "");
std::vector<RulePtr> rules_from_json(const Json& j, const std::string& path = "");

/// Parses a comma-separated list of rules: all, high, low, parity(m:r),
/// prev_bit(b), band(lo:hi). Inside parentheses ',' is accepted in place of ':'.
/// These are also the names rules report, so audit.csv rule columns parse back.
std::vector<RulePtr> rules_from_list(const std::string& list);

}  // namespace forecal
