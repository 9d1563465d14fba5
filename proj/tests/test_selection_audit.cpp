// Copyright 2026 The forecal Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "forecal/adversary.hpp"
#include "forecal/audit.hpp"
#include "forecal/error.hpp"
#include "forecal/selection.hpp"

using namespace forecal;

namespace {

// Test double that knows the future: forecast for day k is a_k.
class HindsightForecaster final : public Forecaster {
public:
    explicit HindsightForecaster(Prefix outcomes) : outcomes_(std::move(outcomes)) {}

    class Eval final : public Evaluator {
    public:
        explicit Eval(const Prefix* o) : o_(o) {}
        double predict() const override {
            return static_cast<double>(to_int((*o_)[static_cast<std::size_t>(seen())]));
        }
        std::unique_ptr<Evaluator> clone() const override { return std::make_unique<Eval>(*this); }

    protected:
        void advance(Bit) override {}

    private:
        const Prefix* o_;
    };

    std::unique_ptr<Evaluator> start() const override { return std::make_unique<Eval>(&outcomes_); }
    Json descriptor() const override { return {{"type", "hindsight"}}; }

private:
    Prefix outcomes_;
};

// Returns a bad value on a chosen day.
class BrokenForecaster final : public Forecaster {
public:
    explicit BrokenForecaster(Day bad_day) : bad_day_(bad_day) {}
    class Eval final : public Evaluator {
    public:
        explicit Eval(Day bad) : bad_(bad) {}
        double predict() const override { return next_day() == bad_ ? 1.25 : 0.5; }
        std::unique_ptr<Evaluator> clone() const override { return std::make_unique<Eval>(*this); }

    protected:
        void advance(Bit) override {}

    private:
        Day bad_;
    };
    std::unique_ptr<Evaluator> start() const override { return std::make_unique<Eval>(bad_day_); }
    Json descriptor() const override { return {{"type", "broken"}}; }

private:
    Day bad_day_;
};

// Records what a rule is shown; selects iff the prefix length is even.
class SpyRule final : public SelectionRule {
public:
    mutable std::vector<std::size_t> lengths;
    bool selects(const Prefix& before, Forecast) const override {
        lengths.push_back(before.size());
        return before.size() % 2 == 0;
    }
    std::string name() const override { return "spy"; }
    Json descriptor() const override { return "spy"; }
};

std::vector<RulePtr> hl_all() { return {all_days_rule(), high_rule(), low_rule()}; }

Prefix random_prefix(std::mt19937_64& gen, std::size_t n) {
    Prefix p;
    for (std::size_t i = 0; i < n; ++i) p.push_back(bit_from(gen() & 1u));
    return p;
}

}  // namespace

TEST_CASE("high and low rules partition the unit interval") {
    const Prefix empty;
    CHECK(high_rule()->selects(empty, Forecast(0.5)));
    CHECK_FALSE(low_rule()->selects(empty, Forecast(0.5)));
    CHECK(low_rule()->selects(empty, Forecast(0.49)));
    CHECK(high_rule()->selects(parse_prefix("0110"), Forecast(1.0)));

    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
        const Forecast f(u(gen));
        CHECK(high_rule()->selects(empty, f) != low_rule()->selects(empty, f));
    }
}

TEST_CASE("band, parity, prev_bit and all-days rules") {
    const double one_plus = std::nextafter(1.0, 2.0);
    CHECK(band_rule(0.9, one_plus)->selects(Prefix{}, Forecast(0.95)));
    CHECK(band_rule(0.9, one_plus)->selects(Prefix{}, Forecast(1.0)));
    CHECK_FALSE(band_rule(0.9, 1.0)->selects(Prefix{}, Forecast(1.0)));
    CHECK_FALSE(band_rule(0.9, one_plus)->selects(Prefix{}, Forecast(0.89)));

    CHECK(parity_rule(2, 0)->selects(parse_prefix("1"), Forecast(0.3)));   // day 2
    CHECK_FALSE(parity_rule(2, 0)->selects(parse_prefix(""), Forecast(0.3)));  // day 1
    CHECK(parity_rule(3, 1)->selects(parse_prefix("101"), Forecast(0.3)));  // day 4

    CHECK_FALSE(prev_bit_rule(Bit::one)->selects(Prefix{}, Forecast(0.5)));
    CHECK(prev_bit_rule(Bit::one)->selects(parse_prefix("01"), Forecast(0.5)));
    CHECK_FALSE(prev_bit_rule(Bit::one)->selects(parse_prefix("10"), Forecast(0.5)));

    CHECK(all_days_rule()->selects(Prefix{}, Forecast(0.0)));
}

TEST_CASE("malformed rule parameters are config errors") {
    CHECK_THROWS_AS(band_rule(0.5, 0.5), Error);
    CHECK_THROWS_AS(band_rule(-0.1, 0.5), Error);
    CHECK_THROWS_AS(band_rule(0.5, 1.1), Error);
    CHECK_THROWS_AS(parity_rule(0, 0), Error);
    CHECK_THROWS_AS(parity_rule(2, 2), Error);
    CHECK_THROWS_AS(rules_from_list("all,bogus"), Error);
    CHECK_THROWS_AS(rule_from_json(Json::parse(R"({"type":"prev_bit","bit":2})")), Error);
}

TEST_CASE("rule names parse back into the same rules") {
    const std::vector<RulePtr> rules{all_days_rule(), high_rule(), low_rule(), band_rule(0.9, 1.0),
                                     parity_rule(2, 0), prev_bit_rule(Bit::one)};
    std::string list;
    for (const auto& r : rules) list += (list.empty() ? "" : ",") + r->name();
    const auto parsed = rules_from_list(list);
    REQUIRE(parsed.size() == rules.size());
    for (std::size_t i = 0; i < rules.size(); ++i) {
        CHECK(parsed[i]->name() == rules[i]->name());
        CHECK(rule_from_json(rules[i]->descriptor())->name() == rules[i]->name());
    }
    CHECK(rules_from_list("parity(2,0)")[0]->name() == "parity(2:0)");
}

TEST_CASE("audit of a constant forecaster on fixed outcomes") {
    const auto f = constant_forecaster(0.7);
    FixedOutcomes nature(parse_prefix("10"));
    const std::vector<RulePtr> rules{all_days_rule()};
    const auto a = audit(*f, nature, rules, 2);
    // d = (0.3, -0.7)
    CHECK(a.stats[0].count == 2);
    CHECK(a.stats[0].sum == (1.0 - 0.7) + (0.0 - 0.7));
    CHECK(a.stats[0].mean() == doctest::Approx(-0.2).epsilon(1e-15));
}

TEST_CASE("low rule never fires for a constant 0.7 forecaster") {
    const auto f = constant_forecaster(0.7);
    IidOutcomes nature(0.5, 1);
    const std::vector<RulePtr> rules{low_rule()};
    const auto a = audit(*f, nature, rules, 1000);
    for (const auto& row : a.checkpoints) CHECK(row.count == 0);
}

TEST_CASE("perfect hindsight has zero discrepancy under every rule") {
    std::mt19937_64 gen(4);
    const Prefix outcomes = random_prefix(gen, 500);
    HindsightForecaster f(outcomes);
    FixedOutcomes nature(outcomes);
    const std::vector<RulePtr> rules{all_days_rule(), high_rule(), low_rule(), parity_rule(2, 0),
                                     prev_bit_rule(Bit::one), band_rule(0.9, 1.0)};
    const auto a = audit(f, nature, rules, 500);
    for (const auto& row : a.checkpoints) CHECK(row.mean == 0.0);
    const auto v = verdict(a, 0.01, 10);
    for (const auto& r : v.rules) {
        if (r.count >= 10) CHECK(r.status == VerdictStatus::consistent);
    }
}

TEST_CASE("rules see only the data before the day") {
    auto spy = std::make_shared<SpyRule>();
    const auto f = beta_bernoulli_forecaster(1, 1);
    IidOutcomes nature(0.5, 2);
    const std::vector<RulePtr> rules{spy};
    const auto a = audit(*f, nature, rules, 50);
    REQUIRE(spy->lengths.size() == 50);
    for (std::size_t k = 0; k < 50; ++k) CHECK(spy->lengths[k] == k);
    CHECK(a.stats[0].count == 25);
}

TEST_CASE("audit errors") {
    const std::vector<RulePtr> rules{all_days_rule()};
    SUBCASE("invalid forecast names the day") {
        BrokenForecaster f(7);
        IidOutcomes nature(0.5, 3);
        try {
            (void)audit(f, nature, rules, 10);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::invalid_forecast);
            CHECK(std::string(e.what()).find("invalid forecast at day 7") != std::string::npos);
        }
    }
    SUBCASE("outcome stream exhausted") {
        FixedOutcomes nature(parse_prefix("0101"));
        try {
            (void)audit(*constant_forecaster(0.5), nature, rules, 5);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::input);
        }
    }
    SUBCASE("bad arguments") {
        FixedOutcomes nature(parse_prefix("0101"));
        CHECK_THROWS_AS((void)audit(*constant_forecaster(0.5), nature, rules, 0), Error);
        CHECK_THROWS_AS((void)audit(*constant_forecaster(0.5), nature, {}, 2), Error);
        const std::vector<Day> bad{2, 2};
        CHECK_THROWS_AS((void)audit(*constant_forecaster(0.5), nature, rules, 4, bad), Error);
    }
}

TEST_CASE("default checkpoints are powers of two plus the horizon") {
    CHECK(default_checkpoints(1) == std::vector<Day>{1});
    CHECK(default_checkpoints(8) == std::vector<Day>{1, 2, 4, 8});
    CHECK(default_checkpoints(10) == std::vector<Day>{1, 2, 4, 8, 10});
}

TEST_CASE("partition and checkpoint properties across forecasters and natures") {
    std::mt19937_64 gen(31);
    const std::vector<ForecasterPtr> forecasters{
        constant_forecaster(0.5), beta_bernoulli_forecaster(1, 1), markov_forecaster(1, 1),
        mixture_forecaster({{constant_forecaster(0.2), 1}, {beta_bernoulli_forecaster(1, 1), 1}})};
    for (const auto& f : forecasters) {
        for (int trial = 0; trial < 5; ++trial) {
            const Day horizon = 1 + static_cast<Day>(gen() % 3000);
            IidOutcomes nature(0.3 + 0.1 * trial, gen());
            const auto a = audit(*f, nature, hl_all(), horizon);
            const auto& all = a.stats_for("all");
            const auto& hi = a.stats_for("high");
            const auto& lo = a.stats_for("low");
            CHECK(hi.count + lo.count == horizon);
            CHECK(all.count == horizon);
            CHECK(std::abs(hi.sum + lo.sum - all.sum) <= 1e-12 * std::max(1.0, std::abs(all.sum)) + 1e-12);

            std::vector<std::int64_t> last(3, 0);
            Day last_day = 0;
            for (const auto& row : a.checkpoints) {
                CHECK(row.day >= last_day);
                if (row.rule == 0) CHECK(row.day > last_day);
                last_day = row.day;
                CHECK(row.count >= last[row.rule]);
                last[row.rule] = row.count;
                CHECK(row.count <= horizon);
                CHECK(std::abs(row.mean) <= 1.0);
            }
            CHECK(a.checkpoints.back().day == horizon);
        }
    }
}

TEST_CASE("doubling the horizon leaves the first half unchanged") {
    const auto f = markov_forecaster(1, 1);
    const std::vector<RulePtr> rules{all_days_rule(), high_rule(), low_rule(), parity_rule(2, 0),
                                     prev_bit_rule(Bit::one)};
    const Day n = 1536;
    IidOutcomes short_nature(0.4, 77), long_nature(0.4, 77);
    const auto short_run = audit(*f, short_nature, rules, n);
    std::vector<Day> days = default_checkpoints(n);
    const auto long_run = audit(*f, long_nature, rules, 2 * n, days);
    for (const auto& row : short_run.checkpoints) {
        bool found = false;
        for (const auto& other : long_run.checkpoints) {
            if (other.day == row.day && other.rule == row.rule) {
                CHECK(other.count == row.count);
                CHECK(other.mean == row.mean);
                found = true;
            }
        }
        CHECK(found);
    }
}

TEST_CASE("verdicts") {
    SUBCASE("empty rule is insufficient data") {
        IidOutcomes nature(0.5, 1);
        const std::vector<RulePtr> rules{low_rule()};
        const auto v = verdict(audit(*constant_forecaster(0.9), nature, rules, 500), 0.1);
        CHECK(v.rules[0].status == VerdictStatus::insufficient_data);
    }
    SUBCASE("adversarial data violates the low rule") {
        AdversarialOutcomes nature;
        const auto v = verdict(audit(*beta_bernoulli_forecaster(1, 1), nature, hl_all(), 10000), 0.25);
        CHECK(v.for_rule("low").status == VerdictStatus::violation);
        CHECK(v.for_rule("high").status == VerdictStatus::violation);
    }
    SUBCASE("hand-built audit") {
        CalibrationAudit a;
        a.horizon = 300;
        a.rule_names = {"r"};
        a.stats = {{300, 30.0}};
        a.checkpoints = {{50, 0, 50, 0.9}, {200, 0, 200, 0.15}, {300, 0, 300, 0.1}};
        const auto v = verdict(a, 0.12, 100);
        CHECK(v.rules[0].max_tail_abs_mean == 0.15);  // day 50 is before burn-in
        CHECK(v.rules[0].status == VerdictStatus::violation);
        CHECK(verdict(a, 0.2, 100).rules[0].status == VerdictStatus::consistent);
        CHECK(verdict(a, 0.2, 301).rules[0].status == VerdictStatus::insufficient_data);
    }
}

TEST_CASE("audit CSV format") {
    FixedOutcomes nature(parse_prefix("101"));
    const std::vector<RulePtr> rules{all_days_rule(), low_rule()};
    const auto a = audit(*constant_forecaster(0.7), nature, rules, 3);
    std::ostringstream out;
    write_audit_csv(out, a);
    CHECK(out.str() ==
          "day,rule,count,mean\n"
          "1,all,1,0.30000000000000004\n"
          "1,low,0,0\n"
          "2,all,2,-0.19999999999999996\n"
          "2,low,0,0\n"
          "3,all,3,-0.033333333333333291\n"
          "3,low,0,0\n");
}
