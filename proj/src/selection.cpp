// Copyright 2026 The forecal Authors
// SPDX-License-Identifier: Apache-2.0

#include "forecal/selection.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "forecal/error.hpp"

namespace forecal {

namespace {

class HighRule final : public SelectionRule {
public:
    bool selects(const Prefix&, Forecast f) const override { return f.value() >= 0.5; }
    std::string name() const override { return "high"; }
    Json descriptor() const override { return "high"; }
};

class LowRule final : public SelectionRule {
public:
    bool selects(const Prefix&, Forecast f) const override { return f.value() < 0.5; }
    std::string name() const override { return "low"; }
    Json descriptor() const override { return "low"; }
};

class AllDaysRule final : public SelectionRule {
public:
    bool selects(const Prefix&, Forecast) const override { return true; }
    std::string name() const override { return "all"; }
    Json descriptor() const override { return "all"; }
};

class BandRule final : public SelectionRule {
public:
    BandRule(double lo, double hi) : lo_(lo), hi_(hi) {}
    bool selects(const Prefix&, Forecast f) const override {
        return lo_ <= f.value() && f.value() < hi_;
    }
    std::string name() const override {
        return "band(" + Json(lo_).dump() + ":" + Json(hi_).dump() + ")";
    }
    Json descriptor() const override { return {{"type", "band"}, {"lo", lo_}, {"hi", hi_}}; }

private:
    double lo_, hi_;
};

class ParityRule final : public SelectionRule {
public:
    ParityRule(std::int64_t m, std::int64_t r) : m_(m), r_(r) {}
    bool selects(const Prefix& before, Forecast) const override {
        return before.next_day() % m_ == r_;
    }
    std::string name() const override {
        return "parity(" + std::to_string(m_) + ":" + std::to_string(r_) + ")";
    }
    Json descriptor() const override { return {{"type", "parity"}, {"m", m_}, {"r", r_}}; }

private:
    std::int64_t m_, r_;
};

class PrevBitRule final : public SelectionRule {
public:
    explicit PrevBitRule(Bit b) : b_(b) {}
    bool selects(const Prefix& before, Forecast) const override {
        return !before.empty() && before.back() == b_;
    }
    std::string name() const override { return "prev_bit(" + std::to_string(to_int(b_)) + ")"; }
    Json descriptor() const override { return {{"type", "prev_bit"}, {"bit", to_int(b_)}}; }

private:
    Bit b_;
};

const double band_ceiling = std::nextafter(1.0, 2.0);

}  // namespace

RulePtr high_rule() { return std::make_shared<HighRule>(); }
RulePtr low_rule() { return std::make_shared<LowRule>(); }
RulePtr all_days_rule() { return std::make_shared<AllDaysRule>(); }

RulePtr band_rule(double lo, double hi) {
    if (!(lo >= 0.0 && lo < hi && hi <= band_ceiling)) {
        throw Error(ErrorKind::config, "band: bounds must satisfy 0 <= lo < hi <= 1+ulp");
    }
    return std::make_shared<BandRule>(lo, hi);
}

RulePtr parity_rule(std::int64_t m, std::int64_t r) {
    if (m < 1 || r < 0 || r >= m) {
        throw Error(ErrorKind::config, "parity: requires m >= 1 and 0 <= r < m");
    }
    return std::make_shared<ParityRule>(m, r);
}

RulePtr prev_bit_rule(Bit b) { return std::make_shared<PrevBitRule>(b); }

RulePtr rule_from_json(const Json& j, const std::string& path) {
    namespace jf = json_fields;
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "all") return all_days_rule();
        if (s == "high") return high_rule();
        if (s == "low") return low_rule();
        jf::fail(path, "unknown rule '" + s + "'");
    }
    jf::require_object(j, path);
    const std::string type = jf::get_string(j, path, "type");
    if (type == "all" || type == "high" || type == "low") {
        jf::check_keys(j, path, {"type"});
        return rule_from_json(Json(type), path);
    }
    if (type == "band") {
        jf::check_keys(j, path, {"type", "lo", "hi"});
        const double lo = jf::get_real(j, path, "lo");
        const double hi = jf::get_real(j, path, "hi");
        if (!(lo >= 0.0 && lo < hi && hi <= band_ceiling)) {
            jf::fail(path, "band bounds must satisfy 0 <= lo < hi <= 1+ulp");
        }
        return band_rule(lo, hi);
    }
    if (type == "parity") {
        jf::check_keys(j, path, {"type", "m", "r"});
        const auto m = jf::get_int(j, path, "m");
        const auto r = jf::get_int(j, path, "r");
        if (m < 1) jf::fail(jf::child(path, "m"), "must be >= 1");
        if (r < 0 || r >= m) jf::fail(jf::child(path, "r"), "must satisfy 0 <= r < m");
        return parity_rule(m, r);
    }
    if (type == "prev_bit") {
        jf::check_keys(j, path, {"type", "bit"});
        const auto b = jf::get_int(j, path, "bit");
        if (b != 0 && b != 1) jf::fail(jf::child(path, "bit"), "must be 0 or 1");
        return prev_bit_rule(bit_from(b == 1));
    }
    jf::fail(jf::child(path, "type"), "unknown rule type '" + type + "'");
}

std::vector<RulePtr> rules_from_json(const Json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) json_fields::fail(path, "expected a nonempty array of rules");
    std::vector<RulePtr> rules;
    for (std::size_t i = 0; i < j.size(); ++i) {
        rules.push_back(rule_from_json(j[i], json_fields::child(path, i)));
    }
    return rules;
}

namespace {

std::vector<std::string> split_arguments(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) out.push_back(item);
    return out;
}

double parse_real_arg(const std::string& s, const std::string& rule) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0') throw Error(ErrorKind::config, "bad argument in rule " + rule);
    return v;
}

}  // namespace

std::vector<RulePtr> rules_from_list(const std::string& list) {
    // Commas separate rules only outside parentheses.
    std::vector<std::string> names;
    std::string current;
    int depth = 0;
    for (char c : list) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            names.push_back(current);
            current.clear();
        } else if (c != ' ') {
            current.push_back(c);
        }
    }
    names.push_back(current);

    std::vector<RulePtr> rules;
    for (const auto& name : names) {
        if (name == "all") {
            rules.push_back(all_days_rule());
            continue;
        }
        if (name == "high") {
            rules.push_back(high_rule());
            continue;
        }
        if (name == "low") {
            rules.push_back(low_rule());
            continue;
        }
        const auto open = name.find('(');
        if (open == std::string::npos || name.back() != ')') {
            throw Error(ErrorKind::config, "unknown rule '" + name + "'");
        }
        const std::string head = name.substr(0, open);
        std::string inner = name.substr(open + 1, name.size() - open - 2);
        std::replace(inner.begin(), inner.end(), ',', ':');
        const auto args = split_arguments(inner);
        std::vector<double> values;
        for (const auto& a : args) values.push_back(parse_real_arg(a, name));
        auto as_int = [&](double v) {
            if (v != std::floor(v)) throw Error(ErrorKind::config, "bad argument in rule " + name);
            return static_cast<std::int64_t>(v);
        };
        if (head == "band" && values.size() == 2) {
            rules.push_back(band_rule(values[0], values[1]));
        } else if (head == "parity" && values.size() == 2) {
            rules.push_back(parity_rule(as_int(values[0]), as_int(values[1])));
        } else if (head == "prev_bit" && values.size() == 1 && (values[0] == 0 || values[0] == 1)) {
            rules.push_back(prev_bit_rule(bit_from(values[0] == 1)));
        } else {
            throw Error(ErrorKind::config, "unknown rule '" + name + "'");
        }
    }
    return rules;
}

}  // namespace forecal
