// Copyright 2026 The forecal Authors
// SPDX-License-Identifier: Apache-2.0

#include "forecal/bayes_check.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "forecal/error.hpp"
#include "forecal/rng.hpp"

namespace forecal {

Bit PredictiveOutcomes::next(const Prefix& before, Forecast forecast) {
    const auto k = static_cast<std::uint64_t>(before.next_day());
    return bit_from(rng::stream_uniform(key_, k) < forecast.value());
}

Prefix predictive_sample(const Forecaster& forecaster, Day horizon, std::uint64_t seed) {
    if (horizon < 1) throw Error(ErrorKind::config, "horizon: must be >= 1");
    auto ev = forecaster.start();
    PredictiveOutcomes nature(seed);
    Prefix out;
    for (Day day = 1; day <= horizon; ++day) {
        const Bit b = nature.next(out, Forecast::checked(ev->predict(), day));
        out.push_back(b);
        ev->observe(b);
    }
    return out;
}

const McRuleSummary& McReport::for_rule(const std::string& rule) const {
    for (const auto& r : rules) {
        if (r.rule == rule) return r;
    }
    throw std::out_of_range("no rule named " + rule);
}

McReport dawid_mc_check(const Forecaster& forecaster, std::span<const RulePtr> rules,
                        const McOptions& options) {
    if (options.runs < 1) throw Error(ErrorKind::config, "runs: must be >= 1");
    if (options.horizon < 1) throw Error(ErrorKind::config, "horizon: must be >= 1");
    if (!(options.tolerance > 0.0)) throw Error(ErrorKind::config, "tolerance: must be > 0");
    if (rules.empty()) throw Error(ErrorKind::config, "rules: at least one rule is required");

    const auto runs = static_cast<std::size_t>(options.runs);
    std::vector<std::vector<BucketStats>> finals(runs);
    std::vector<std::exception_ptr> failures(runs);
    const Day horizon = options.horizon;
    const std::vector<Day> last_only{horizon};

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t j = next++; j < runs; j = next++) {
            try {
                PredictiveOutcomes nature(rng::derive_key(options.master_seed, j));
                finals[j] = audit(forecaster, nature, rules, horizon, last_only).stats;
            } catch (...) {
                failures[j] = std::current_exception();
            }
        }
    };
    const unsigned workers =
        std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(runs)));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    for (const auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }

    McReport report;
    report.forecaster = forecaster.descriptor();
    report.options = options;
    for (const auto& r : rules) {
        McRuleSummary summary;
        summary.rule = r->name();
        report.rules.push_back(std::move(summary));
    }
    std::vector<double> abs_sums(rules.size(), 0.0);
    for (std::size_t j = 0; j < runs; ++j) {
        for (std::size_t i = 0; i < rules.size(); ++i) {
            const BucketStats& s = finals[j][i];
            report.per_run.push_back({static_cast<std::int64_t>(j), i, s.count, s.mean()});
            McRuleSummary& sum = report.rules[i];
            if (s.count < options.min_count || s.count == 0) {
                ++sum.insufficient_runs;
                continue;
            }
            const double a = std::abs(s.mean());
            ++sum.evaluated_runs;
            if (a <= options.tolerance) ++sum.passed_runs;
            sum.worst_abs_mean = std::max(sum.worst_abs_mean, a);
            abs_sums[i] += a;
        }
    }
    for (std::size_t i = 0; i < rules.size(); ++i) {
        McRuleSummary& sum = report.rules[i];
        if (sum.evaluated_runs > 0) {
            const auto n = static_cast<double>(sum.evaluated_runs);
            sum.pass_fraction = static_cast<double>(sum.passed_runs) / n;
            sum.mean_abs_mean = abs_sums[i] / n;
        }
    }
    return report;
}

Json report_to_json(const McReport& report) {
    Json rules = Json::array();
    for (const auto& r : report.rules) {
        rules.push_back({{"rule", r.rule},
                         {"evaluated_runs", r.evaluated_runs},
                         {"insufficient_runs", r.insufficient_runs},
                         {"passed_runs", r.passed_runs},
                         {"pass_fraction", r.pass_fraction ? Json(*r.pass_fraction) : Json()},
                         {"worst_abs_mean", r.worst_abs_mean},
                         {"mean_abs_mean", r.mean_abs_mean}});
    }
    return {{"forecaster", report.forecaster},
            {"runs", report.options.runs},
            {"horizon", report.options.horizon},
            {"tolerance", report.options.tolerance},
            {"min_count", report.options.min_count},
            {"seed", report.options.master_seed},
            {"rules", rules}};
}

void write_runs_csv(std::ostream& out, const McReport& report) {
    out << "run,rule,count,final_mean\n";
    for (const auto& row : report.per_run) {
        out << row.run << ',' << report.rules[row.rule].rule << ',' << row.count << ','
            << format_real(row.final_mean) << '\n';
    }
}

}  // namespace forecal
