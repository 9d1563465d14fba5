// Copyright 2026 The forecal Authors
// SPDX-License-Identifier: Apache-2.0

// Monte Carlo check that a Bayesian forecaster looks calibrated on data drawn
// from its own prior. Sampling a_k ~ Bernoulli(p_k) day by day, with p_k the
// forecast on the sampled prefix, draws a sequence from the prior the
// forecaster conditionalizes.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "forecal/audit.hpp"
#include "forecal/forecasters.hpp"
#include "forecal/selection.hpp"

namespace forecal {

/// Day k is 1 iff u_k < p_k, u_k the k-th uniform of stream `key`.
class PredictiveOutcomes final : public OutcomeSource {
public:
    explicit PredictiveOutcomes(std::uint64_t key) : key_(key) {}
    Bit next(const Prefix& before, Forecast forecast) override;

private:
    std::uint64_t key_;
};

Prefix predictive_sample(const Forecaster& forecaster, Day horizon, std::uint64_t seed);

struct McOptions {
    Day horizon = 100000;
    std::int64_t runs = 100;
    double tolerance = 0.02;
    std::uint64_t master_seed = 0;
    /// Runs in which a rule selects fewer days are tallied as insufficient-data.
    std::int64_t min_count = 100;
    unsigned workers = 1;
};

struct McRuleSummary {
    std::string rule;
    std::int64_t evaluated_runs = 0;
    std::int64_t insufficient_runs = 0;
    std::int64_t passed_runs = 0;
    std::optional<double> pass_fraction;  // empty when no run qualified
    double worst_abs_mean = 0.0;
    double mean_abs_mean = 0.0;
};

struct McRunRow {
    std::int64_t run;
    std::size_t rule;
    std::int64_t count;
    double final_mean;
};

struct McReport {
    Json forecaster;
    McOptions options;
    std::vector<McRuleSummary> rules;
    std::vector<McRunRow> per_run;  // ordered by (run, rule)

    const McRuleSummary& for_rule(const std::string& rule) const;
};

/// Run j samples with seed rng::derive_key(master_seed, j) and audits the
/// sample against `rules`. Runs may execute on several workers; aggregation
/// is by run index, so the report does not depend on the worker count.
McReport dawid_mc_check(const Forecaster& forecaster, std::span<const RulePtr> rules,
                        const McOptions& options);

/// Single JSON document (the worker count is not part of it).
Json report_to_json(const McReport& report);
/// CSV with header run,rule,count,final_mean.
void write_runs_csv(std::ostream& out, const McReport& report);

}  // namespace forecal
