// Copyright 2026 The forecal Authors
// SPDX-License-Identifier: Apache-2.0

#include "forecal/forecasters.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "forecal/error.hpp"
#include "forecal/rng.hpp"

namespace forecal {

double Forecaster::raw_forecast(const Prefix& prefix) const {
    return start_at(prefix)->predict();
}

std::unique_ptr<Evaluator> Forecaster::start_at(const Prefix& prefix) const {
    auto ev = start();
    for (Bit b : prefix.bits()) ev->observe(b);
    return ev;
}

namespace {

[[noreturn]] void config_error(const std::string& message) {
    throw Error(ErrorKind::config, message);
}

void check_pseudocounts(double alpha, double beta) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) config_error("alpha: must be a positive number");
    if (!(beta > 0.0) || !std::isfinite(beta)) config_error("beta: must be a positive number");
}

// ---------------------------------------------------------------------------

class ConstantForecaster final : public Forecaster {
public:
    explicit ConstantForecaster(double c) : c_(c) {}

    class Eval final : public Evaluator {
    public:
        explicit Eval(double c) : c_(c) {}
        double predict() const override { return c_; }
        std::unique_ptr<Evaluator> clone() const override { return std::make_unique<Eval>(*this); }

    protected:
        void advance(Bit) override {}

    private:
        double c_;
    };

    std::unique_ptr<Evaluator> start() const override { return std::make_unique<Eval>(c_); }
    double raw_forecast(const Prefix&) const override { return c_; }
    Json descriptor() const override { return {{"type", "constant"}, {"p", c_}}; }

private:
    double c_;
};

// ---------------------------------------------------------------------------

class BetaBernoulliForecaster final : public Forecaster {
public:
    BetaBernoulliForecaster(double alpha, double beta) : alpha_(alpha), beta_(beta) {}

    static double predictive(double alpha, double beta, std::int64_t ones, std::int64_t n) {
        return (alpha + static_cast<double>(ones)) / (alpha + beta + static_cast<double>(n));
    }

    class Eval final : public Evaluator {
    public:
        Eval(double alpha, double beta) : alpha_(alpha), beta_(beta) {}
        double predict() const override { return predictive(alpha_, beta_, ones_, n_); }
        std::unique_ptr<Evaluator> clone() const override { return std::make_unique<Eval>(*this); }

    protected:
        void advance(Bit b) override {
            ones_ += to_int(b);
            ++n_;
        }

    private:
        double alpha_, beta_;
        std::int64_t ones_ = 0, n_ = 0;
    };

    std::unique_ptr<Evaluator> start() const override {
        return std::make_unique<Eval>(alpha_, beta_);
    }
    double raw_forecast(const Prefix& prefix) const override {
        return predictive(alpha_, beta_, prefix.ones(), static_cast<std::int64_t>(prefix.size()));
    }
    Json descriptor() const override {
        return {{"type", "beta_bernoulli"}, {"alpha", alpha_}, {"beta", beta_}};
    }

private:
    double alpha_, beta_;
};

// ---------------------------------------------------------------------------

class MarkovForecaster final : public Forecaster {
public:
    MarkovForecaster(double alpha, double beta) : alpha_(alpha), beta_(beta) {}

    class Eval final : public Evaluator {
    public:
        Eval(double alpha, double beta) : alpha_(alpha), beta_(beta) {}

        double predict() const override {
            if (!last_) return alpha_ / (alpha_ + beta_);
            const auto s = static_cast<std::size_t>(to_int(*last_));
            return (alpha_ + static_cast<double>(to_one_[s])) /
                   (alpha_ + beta_ + static_cast<double>(exits_[s]));
        }
        std::unique_ptr<Evaluator> clone() const override { return std::make_unique<Eval>(*this); }

    protected:
        void advance(Bit b) override {
            if (last_) {
                const auto s = static_cast<std::size_t>(to_int(*last_));
                ++exits_[s];
                to_one_[s] += to_int(b);
            }
            last_ = b;
        }

    private:
        double alpha_, beta_;
        std::optional<Bit> last_;
        std::int64_t exits_[2] = {0, 0};   // transitions out of state s
        std::int64_t to_one_[2] = {0, 0};  // of which landed on 1
    };

    std::unique_ptr<Evaluator> start() const override {
        return std::make_unique<Eval>(alpha_, beta_);
    }
    Json descriptor() const override {
        return {{"type", "markov"}, {"alpha", alpha_}, {"beta", beta_}};
    }

private:
    double alpha_, beta_;
};

// ---------------------------------------------------------------------------

class MixtureForecaster final : public Forecaster {
public:
    explicit MixtureForecaster(std::vector<MixtureComponent> components)
        : components_(std::move(components)) {}

    class Eval final : public Evaluator {
    public:
        explicit Eval(const std::vector<MixtureComponent>& components) {
            double total = 0.0;
            for (const auto& c : components) total += c.weight;
            for (const auto& c : components) {
                parts_.push_back(c.base->start());
                log_weights_.push_back(std::log(c.weight / total));
            }
        }
        Eval(const Eval& other) : log_weights_(other.log_weights_) {
            for (const auto& p : other.parts_) parts_.push_back(p->clone());
        }

        double predict() const override {
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < parts_.size(); ++i) {
                if (log_weights_[i] == -std::numeric_limits<double>::infinity()) continue;
                const double w = std::exp(log_weights_[i]);
                const double p = parts_[i]->predict();
                if (!Forecast::valid(p)) return p;
                num += w * p;
                den += w;
            }
            if (!(den > 0.0)) {
                throw Error(ErrorKind::prior_contradicted,
                            "prior contradicted: observed prefix has probability zero under the "
                            "mixture (day " + std::to_string(next_day()) + ")");
            }
            return std::min(1.0, num / den);
        }
        std::unique_ptr<Evaluator> clone() const override { return std::make_unique<Eval>(*this); }

    protected:
        void advance(Bit b) override {
            constexpr double neg_inf = -std::numeric_limits<double>::infinity();
            double top = neg_inf;
            for (std::size_t i = 0; i < parts_.size(); ++i) {
                if (log_weights_[i] != neg_inf) {
                    const double p = parts_[i]->predict();
                    const double like = b == Bit::one ? p : 1.0 - p;
                    log_weights_[i] = like > 0.0 ? log_weights_[i] + std::log(like) : neg_inf;
                }
                parts_[i]->observe(b);
                top = std::max(top, log_weights_[i]);
            }
            // running normalization keeps the largest weight at log 0
            if (top != neg_inf) {
                for (double& lw : log_weights_) lw -= top;
            }
        }

    private:
        std::vector<std::unique_ptr<Evaluator>> parts_;
        std::vector<double> log_weights_;
    };

    std::unique_ptr<Evaluator> start() const override { return std::make_unique<Eval>(components_); }
    Json descriptor() const override {
        Json comps = Json::array();
        for (const auto& c : components_) {
            comps.push_back({{"weight", c.weight}, {"forecaster", c.base->descriptor()}});
        }
        return {{"type", "mixture"}, {"components", comps}};
    }

private:
    std::vector<MixtureComponent> components_;
};

}  // namespace

// ---------------------------------------------------------------------------

ForecasterPtr constant_forecaster(double c) {
    if (!Forecast::valid(c)) config_error("p: constant forecast must lie in [0,1]");
    return std::make_shared<ConstantForecaster>(c);
}

ForecasterPtr beta_bernoulli_forecaster(double alpha, double beta) {
    check_pseudocounts(alpha, beta);
    return std::make_shared<BetaBernoulliForecaster>(alpha, beta);
}

ForecasterPtr markov_forecaster(double alpha, double beta) {
    check_pseudocounts(alpha, beta);
    return std::make_shared<MarkovForecaster>(alpha, beta);
}

ForecasterPtr mixture_forecaster(std::vector<MixtureComponent> components) {
    if (components.empty()) config_error("components: mixture needs at least one component");
    for (const auto& c : components) {
        if (!c.base) config_error("components: null forecaster");
        if (!(c.weight > 0.0) || !std::isfinite(c.weight)) {
            config_error("weight: mixture weights must be positive");
        }
    }
    return std::make_shared<MixtureForecaster>(std::move(components));
}

// ---------------------------------------------------------------------------

MixedStrategyForecaster::MixedStrategyForecaster(std::vector<ForecasterPtr> components,
                                                 std::vector<double> weights, std::uint64_t seed)
    : components_(std::move(components)), weights_(std::move(weights)), seed_(seed) {
    if (components_.empty()) config_error("components: mixed strategy needs at least one component");
    if (weights_.size() != components_.size()) {
        config_error("weights: expected one weight per component");
    }
    double total = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0) || !std::isfinite(w)) config_error("weights: must be nonnegative");
        total += w;
    }
    if (!(total > 0.0)) config_error("weights: must not all be zero");
    double acc = 0.0;
    for (double w : weights_) {
        acc += w;
        cumulative_.push_back(acc / total);
    }
    cumulative_.back() = 1.0;
}

namespace {

std::size_t draw_component(const std::vector<double>& cumulative, std::uint64_t seed, Day k) {
    const double u = rng::stream_uniform(seed, static_cast<std::uint64_t>(k));
    for (std::size_t i = 0; i < cumulative.size(); ++i) {
        if (u < cumulative[i]) return i;
    }
    return cumulative.size() - 1;
}

class MixedStrategyEval final : public Evaluator {
public:
    MixedStrategyEval(const std::vector<ForecasterPtr>& components,
                      const std::vector<double>& cumulative, std::uint64_t seed)
        : cumulative_(cumulative), seed_(seed) {
        for (const auto& c : components) parts_.push_back(c->start());
    }
    MixedStrategyEval(const MixedStrategyEval& other)
        : Evaluator(other), cumulative_(other.cumulative_), seed_(other.seed_) {
        for (const auto& p : other.parts_) parts_.push_back(p->clone());
    }

    double predict() const override {
        return parts_[draw_component(cumulative_, seed_, next_day())]->predict();
    }
    std::unique_ptr<Evaluator> clone() const override {
        return std::make_unique<MixedStrategyEval>(*this);
    }

protected:
    void advance(Bit b) override {
        for (auto& p : parts_) p->observe(b);
    }

private:
    std::vector<double> cumulative_;
    std::uint64_t seed_;
    std::vector<std::unique_ptr<Evaluator>> parts_;
};

}  // namespace

std::size_t MixedStrategyForecaster::component_for_day(Day k) const {
    return draw_component(cumulative_, seed_, k);
}

std::unique_ptr<Evaluator> MixedStrategyForecaster::start() const {
    return std::make_unique<MixedStrategyEval>(components_, cumulative_, seed_);
}

Json MixedStrategyForecaster::descriptor() const {
    Json comps = Json::array();
    for (const auto& c : components_) comps.push_back(c->descriptor());
    return {{"type", "mixed_strategy"}, {"components", comps}, {"weights", weights_}, {"seed", seed_}};
}

std::shared_ptr<const MixedStrategyForecaster> mixed_strategy_forecaster(
    std::vector<ForecasterPtr> components, std::vector<double> weights, std::uint64_t seed) {
    return std::make_shared<MixedStrategyForecaster>(std::move(components), std::move(weights), seed);
}

// ---------------------------------------------------------------------------

ForecasterPtr forecaster_from_json(const Json& j, const std::string& path) {
    namespace jf = json_fields;
    jf::require_object(j, path);
    const std::string type = jf::get_string(j, path, "type");

    auto positive = [&](std::string_view key) {
        const double v = jf::get_real(j, path, key);
        if (!(v > 0.0)) jf::fail(jf::child(path, key), "must be > 0");
        return v;
    };

    if (type == "constant") {
        jf::check_keys(j, path, {"type", "p"});
        const double p = jf::get_real(j, path, "p");
        if (!Forecast::valid(p)) jf::fail(jf::child(path, "p"), "must lie in [0,1]");
        return constant_forecaster(p);
    }
    if (type == "beta_bernoulli" || type == "markov") {
        jf::check_keys(j, path, {"type", "alpha", "beta"});
        const double alpha = positive("alpha");
        const double beta = positive("beta");
        return type == "markov" ? markov_forecaster(alpha, beta)
                                : beta_bernoulli_forecaster(alpha, beta);
    }
    if (type == "mixture") {
        jf::check_keys(j, path, {"type", "components"});
        const std::string cpath = jf::child(path, "components");
        const Json& arr = jf::required(j, path, "components");
        if (!arr.is_array() || arr.empty()) jf::fail(cpath, "expected a nonempty array");
        std::vector<MixtureComponent> comps;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string ipath = jf::child(cpath, i);
            jf::check_keys(arr[i], ipath, {"weight", "forecaster"});
            const double w = jf::get_real(arr[i], ipath, "weight");
            if (!(w > 0.0)) jf::fail(jf::child(ipath, "weight"), "must be > 0");
            comps.push_back({forecaster_from_json(jf::required(arr[i], ipath, "forecaster"),
                                                  jf::child(ipath, "forecaster")),
                             w});
        }
        return mixture_forecaster(std::move(comps));
    }
    if (type == "mixed_strategy") {
        jf::check_keys(j, path, {"type", "components", "weights", "seed"});
        const std::string cpath = jf::child(path, "components");
        const std::string wpath = jf::child(path, "weights");
        const Json& arr = jf::required(j, path, "components");
        const Json& warr = jf::required(j, path, "weights");
        if (!arr.is_array() || arr.empty()) jf::fail(cpath, "expected a nonempty array");
        if (!warr.is_array() || warr.size() != arr.size()) {
            jf::fail(wpath, "expected an array with one weight per component");
        }
        std::vector<ForecasterPtr> comps;
        std::vector<double> weights;
        double total = 0.0;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            comps.push_back(forecaster_from_json(arr[i], jf::child(cpath, i)));
            const double w = jf::as_real(warr[i], jf::child(wpath, i));
            if (w < 0.0) jf::fail(jf::child(wpath, i), "must be >= 0");
            total += w;
            weights.push_back(w);
        }
        if (!(total > 0.0)) jf::fail(wpath, "weights must not all be zero");
        return mixed_strategy_forecaster(std::move(comps), std::move(weights),
                                         jf::get_uint64(j, path, "seed"));
    }
    jf::fail(jf::child(path, "type"), "unknown forecaster type '" + type + "'");
}

}  // namespace forecal
