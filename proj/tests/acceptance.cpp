// Copyright 2026 The forecal Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "forecal/adversary.hpp"
#include "forecal/bayes_check.hpp"
#include "forecal/experiment.hpp"
#include "forecal/game.hpp"
#include "forecal/rng.hpp"
#include "oracles.hpp"

using namespace forecal;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

constexpr double slack = 1e-12;

struct Named {
    std::string label;
    ForecasterPtr forecaster;
};

std::vector<Named> criterion1_forecasters() {
    return {{"constant(0.3)", constant_forecaster(0.3)},
            {"constant(0.5)", constant_forecaster(0.5)},
            {"constant(0.7)", constant_forecaster(0.7)},
            {"beta_bernoulli(1,1)", beta_bernoulli_forecaster(1, 1)},
            {"markov(1,1)", markov_forecaster(1, 1)},
            {"mixture(beta_bernoulli(1,1),markov(1,1))",
             mixture_forecaster({{beta_bernoulli_forecaster(1, 1), 1}, {markov_forecaster(1, 1), 1}})},
            {"mixed_strategy(constant 0.2,constant 0.8)",
             mixed_strategy_forecaster({constant_forecaster(0.2), constant_forecaster(0.8)}, {1, 1}, 17)}};
}

struct AdversarialRun {
    BucketStats all, high, low;
    double seconds = 0;
};

AdversarialRun adversarial_run(const Forecaster& f, Day horizon) {
    const auto start = Clock::now();
    AdversarialOutcomes nature;
    const std::vector<RulePtr> rules{all_days_rule(), high_rule(), low_rule()};
    const std::vector<Day> last{horizon};
    const auto a = audit(f, nature, rules, horizon, last);
    AdversarialRun r{a.stats[0], a.stats[1], a.stats[2], 0};
    r.seconds = seconds_since(start);
    return r;
}

void check_margins(const std::string& label, const AdversarialRun& r, Outcome& out) {
    if (r.low.count > 0 && !(r.low.mean() > 0.5 - slack)) {
        out.fail(label + ": low mean " + format_real(r.low.mean()));
    }
    if (r.high.count > 0 && !(r.high.mean() <= -0.5 + slack)) {
        out.fail(label + ": high mean " + format_real(r.high.mean()));
    }
    if (r.low.count + r.high.count == 0) out.fail(label + ": both buckets empty");
    if (r.seconds >= 1.0) out.fail(label + ": took " + std::to_string(r.seconds) + " s");
}

// Criterion 1 and, from the same runs, criterion 8.
std::vector<std::pair<std::string, AdversarialRun>> criterion1_runs;

Outcome adversary_margin() {
    Outcome out;
    double worst_low = 1, worst_high = -1, slowest = 0;
    for (const auto& [label, f] : criterion1_forecasters()) {
        const AdversarialRun r = adversarial_run(*f, 10000);
        criterion1_runs.emplace_back(label, r);
        check_margins(label, r, out);
        if (r.low.count) worst_low = std::min(worst_low, r.low.mean());
        if (r.high.count) worst_high = std::max(worst_high, r.high.mean());
        slowest = std::max(slowest, r.seconds);
    }
    if (out.pass) {
        out.detail = "7 forecasters, horizon 10^4: min low mean " + format_real(worst_low) +
                     ", max high mean " + format_real(worst_high) + ", slowest " +
                     std::to_string(slowest) + " s";
    }
    return out;
}

Outcome audit_partition() {
    Outcome out;
    double worst = 0;
    for (const auto& [label, r] : criterion1_runs) {
        if (r.high.count + r.low.count != 10000 || r.all.count != 10000) {
            out.fail(label + ": counts do not partition the horizon");
        }
        const double gap = std::abs(r.high.sum + r.low.sum - r.all.sum);
        worst = std::max(worst, gap);
        if (gap > 1e-12) out.fail(label + ": |sum_high + sum_low - sum_all| = " + format_real(gap));
    }
    if (criterion1_runs.empty()) out.fail("no criterion-1 runs recorded");
    if (out.pass) {
        out.detail = std::to_string(criterion1_runs.size()) +
                     " runs: counts partition 10^4, max sum gap " + format_real(worst);
    }
    return out;
}

// Replays a transcript with independent bookkeeping. Every player-2 turn must
// respect the termination bound, satisfy its recorded condition at its last
// bit and at no earlier bit of the same turn.
void verify_transcript(const Forecaster& f, const GameTranscript& t, const std::string& label,
                       Outcome& out) {
    oracle::Bucket high, low;
    Prefix seq;
    // The replay sums naively, so a mean sitting exactly on +-0.25 may land
    // an ulp to either side. Ties within `eps` count as agreeing with the
    // engine in both directions.
    constexpr double eps = 1e-12;
    auto met = [&](StopCondition c, double margin) {
        return c == StopCondition::low_mean_high
                   ? low.count > 0 && low.sum / low.count >= 0.25 + margin
                   : high.count > 0 && high.sum / high.count <= -0.25 - margin;
    };
    auto clearly_met = [&] {
        return met(StopCondition::low_mean_high, eps) || met(StopCondition::high_mean_low, eps);
    };
    for (const Move& m : t.moves) {
        const auto k0 = static_cast<Day>(seq.size());
        for (std::size_t i = 0; i < m.string.size(); ++i) {
            const double p = f.forecast(seq).value();
            const Bit b = m.string[i];
            const double d = (b == Bit::one ? 1.0 : 0.0) - p;
            oracle::Bucket& bucket = p >= 0.5 ? high : low;
            ++bucket.count;
            bucket.sum += d;
            seq.push_back(b);
            const bool last = i + 1 == m.string.size();
            if (m.player == 2 && !last && clearly_met()) {
                out.fail(label + ": player-2 turn kept going after its condition held");
                return;
            }
        }
        if (m.player != 2) continue;
        if (static_cast<Day>(m.string.size()) > termination_bound(k0)) {
            out.fail(label + ": turn of " + std::to_string(m.string.size()) + " bits from k0=" +
                     std::to_string(k0));
            return;
        }
        if (!m.condition || !met(*m.condition, -eps)) {
            out.fail(label + ": recorded stopping condition does not hold");
            return;
        }
        if (high.count != m.stats_after.high.count || low.count != m.stats_after.low.count) {
            out.fail(label + ": recorded bucket counts disagree with replay");
            return;
        }
    }
}

Outcome proposition_strategy() {
    Outcome out;
    const std::uint64_t seed = 20261018;
    const std::vector<Named> forecasters{{"beta_bernoulli(1,1)", beta_bernoulli_forecaster(1, 1)},
                                         {"constant(0.7)", constant_forecaster(0.7)}};
    const std::vector<std::pair<std::string, Player1Ptr>> players{
        {"fixed(1)", p1_fixed(parse_prefix("1"))},
        {"random(100)", p1_random(100, seed)},
        {"predictive_sampler(100)", p1_predictive_sampler(100, seed)}};
    double slowest = 0;
    Day longest = 0;
    for (const auto& [flabel, f] : forecasters) {
        for (const auto& [plabel, p1] : players) {
            const std::string label = flabel + " vs " + plabel;
            GameOptions o;
            o.rounds = 50;
            o.seed = seed;
            o.verify_stats = true;
            const auto start = Clock::now();
            GameTranscript t;
            try {
                t = play_game(*f, *p1, o);
            } catch (const std::exception& e) {
                out.fail(label + ": " + e.what());
                continue;
            }
            const double secs = seconds_since(start);
            slowest = std::max(slowest, secs);
            if (secs >= 10.0) out.fail(label + ": took " + std::to_string(secs) + " s");
            if (t.moves.size() != 100) out.fail(label + ": expected 100 moves");
            longest = std::max(longest, t.moves.back().day_count_after);
            verify_transcript(*f, t, label, out);
        }
    }
    if (out.pass) {
        out.detail = "6 games x 50 rounds: all turns within 3*k0+1 and sharp; longest game " +
                     std::to_string(longest) + " days, slowest " + std::to_string(slowest) + " s";
    }
    return out;
}

unsigned worker_count() { return std::max(1u, std::thread::hardware_concurrency()); }

Outcome dawid_monte_carlo() {
    Outcome out;
    const auto f = beta_bernoulli_forecaster(1, 1);
    const std::vector<RulePtr> rules{all_days_rule(), high_rule(), low_rule()};
    McOptions o;
    o.horizon = 100000;
    o.runs = 200;
    o.tolerance = 0.02;
    o.min_count = 100;
    o.master_seed = 20261018;
    o.workers = worker_count();
    const auto start = Clock::now();
    const auto report = dawid_mc_check(*f, rules, o);
    const double secs = seconds_since(start);
    std::ostringstream detail;
    detail << "200 runs x 10^5 days in " << secs << " s;";
    for (const auto& r : report.rules) {
        detail << ' ' << r.rule << '=' << r.passed_runs << '/' << r.evaluated_runs;
        if (!r.pass_fraction || *r.pass_fraction < 0.95) {
            out.fail("");
        }
    }
    if (secs >= 120.0) out.fail("");
    std::int64_t failing = 0, largest = 0;
    for (const auto& row : report.per_run) {
        if (row.count >= o.min_count && std::abs(row.final_mean) > o.tolerance) {
            ++failing;
            largest = std::max(largest, row.count);
        }
    }
    detail << " (need >= 0.95 each, < 120 s); " << failing
           << " out-of-tolerance rule-runs, all with at most " << largest << " selected days";
    out.detail = detail.str();
    return out;
}

Outcome calibrated_oracle() {
    Outcome out;
    std::ostringstream detail;
    for (double theta : {0.3, 0.5}) {
        const auto f = constant_forecaster(theta);
        const std::vector<RulePtr> rules{all_days_rule()};
        const std::vector<Day> last{100000};
        int within = 0;
        double worst = 0;
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            IidOutcomes nature(theta, rng::derive_key(0xC0FFEE, seed));
            const double m = std::abs(audit(*f, nature, rules, 100000, last).stats[0].mean());
            within += m <= 0.01;
            worst = std::max(worst, m);
        }
        detail << "theta=" << theta << ": " << within << "/100 within 0.01 (worst " << format_real(worst)
               << "); ";
        if (within < 99) out.fail("");
    }
    out.detail = detail.str();
    return out;
}

Outcome conjugacy_oracle() {
    Outcome out;
    double worst = 0;
    int checked = 0;
    for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{2.0, 3.0}, std::pair{3.5, 1.5}}) {
        const auto f = beta_bernoulli_forecaster(a, b);
        for (int n = 0; n <= 8; ++n) {
            for (const auto& s : oracle::all_strings(n)) {
                const double got = f->forecast(parse_prefix(s)).value();
                const double want = oracle::beta_grid_predictive(a, b, s);
                worst = std::max(worst, std::abs(got - want));
                ++checked;
            }
        }
    }
    if (worst > 1e-6) out.fail("");
    out.detail = std::to_string(checked) + " prefixes (3 priors, length <= 8): max error " + format_real(worst);
    return out;
}

Outcome mixed_strategy_margin() {
    Outcome out;
    double worst_low = 1, worst_high = -1;
    for (std::uint64_t seed : {1u, 17u, 4242u}) {
        for (auto w : {std::vector<double>{1, 1}, std::vector<double>{1, 3}}) {
            const auto f = mixed_strategy_forecaster({constant_forecaster(0.2), constant_forecaster(0.8)}, w, seed);
            const auto r = adversarial_run(*f, 10000);
            check_margins("seed " + std::to_string(seed), r, out);
            if (r.low.count) worst_low = std::min(worst_low, r.low.mean());
            if (r.high.count) worst_high = std::max(worst_high, r.high.mean());
        }
    }
    if (out.pass) {
        out.detail = "6 seed/weight variants: min low mean " + format_real(worst_low) + ", max high mean " +
                     format_real(worst_high);
    }
    return out;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome reproducibility() {
    Outcome out;
    const fs::path root = fs::temp_directory_path() / "forecal_acceptance";
    fs::remove_all(root);
    fs::create_directories(root);
    {
        std::ofstream(root / "run.json")
            << R"({"schema_version":1,"forecaster":{"type":"markov","alpha":1,"beta":1},
                  "nature":{"predictive":{}},"rules":["all","high","low"],"horizon":20000,"seed":5})";
        std::ofstream(root / "game.json")
            << R"({"schema_version":1,"forecaster":{"type":"beta_bernoulli","alpha":1,"beta":1},"seed":9,
                  "game":{"player1":{"type":"predictive_sampler","n":50},"rounds":20}})";
        std::ofstream(root / "mc.json")
            << R"({"schema_version":1,"forecaster":{"type":"beta_bernoulli","alpha":1,"beta":1},
                  "rules":["all","high","low"],"horizon":10000,"runs":40,"seed":3})";
    }
    std::ostringstream sink;
    auto opts = [&](const char* config, const std::string& out_dir, unsigned workers = 1) {
        CommandOptions o;
        o.config_path = (root / config).string();
        o.out_dir = (root / out_dir).string();
        o.quiet = true;
        o.workers = workers;
        return o;
    };
    int compared = 0;
    auto same = [&](const std::string& a, const std::string& b, const char* file) {
        ++compared;
        const std::string x = slurp(root / a / file);
        if (x.empty() || x != slurp(root / b / file)) out.fail(std::string(file) + " differs between " + a + " and " + b);
    };
    try {
        cmd_run(opts("run.json", "run1"), sink);
        cmd_run(opts("run.json", "run2"), sink);
        same("run1", "run2", "trace.csv");
        same("run1", "run2", "audit.csv");
        cmd_game(opts("game.json", "game1"), sink);
        cmd_game(opts("game.json", "game2"), sink);
        same("game1", "game2", "transcript.jsonl");
        cmd_mc(opts("mc.json", "mc1"), sink);
        cmd_mc(opts("mc.json", "mc2"), sink);
        cmd_mc(opts("mc.json", "mcN", std::max(2u, worker_count())), sink);
        same("mc1", "mc2", "report.json");
        same("mc1", "mcN", "report.json");
    } catch (const std::exception& e) {
        out.fail(e.what());
    }
    if (out.pass) {
        out.detail = std::to_string(compared) + " artifact comparisons byte-identical (mc with 1 vs " +
                     std::to_string(std::max(2u, worker_count())) + " workers)";
    }
    return out;
}

}  // namespace

int main() {
    struct Criterion {
        int number;
        const char* name;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {1, "adversary margin", adversary_margin},
        {2, "player-2 winning strategy", proposition_strategy},
        {3, "Bayesian self-calibration Monte Carlo", dawid_monte_carlo},
        {4, "calibrated oracle", calibrated_oracle},
        {5, "conjugacy oracle", conjugacy_oracle},
        {6, "mixed-strategy forecaster margin", mixed_strategy_margin},
        {7, "reproducibility", reproducibility},
        {8, "audit partition", audit_partition},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        failures += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.number << " (" << c.name << "): " << o.detail
                  << std::endl;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
    return failures == 0 ? 0 : 1;
}
