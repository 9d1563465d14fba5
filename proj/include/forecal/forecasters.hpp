// Copyright 2026 The forecal Authors
// SPDX-License-Identifier: Apache-2.0

// Probabilistic forecasting systems: maps from a data prefix to the
// probability that the next bit is a one.
//
// A Forecaster is immutable and may be shared across threads. Sequential
// work (audits, games, sampling) goes through an Evaluator, a run-local
// object positioned at some prefix that is advanced one bit at a time, so a
// day costs O(1) for the count-based forecasters instead of a replay of the
// whole history.

#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "forecal/core.hpp"
#include "forecal/json_fields.hpp"

namespace forecal {

class Evaluator {
public:
    virtual ~Evaluator() = default;

    /// Raw forecast for the next day. Not validated here; callers go through
    /// Forecast::checked so that a misbehaving forecaster is reported with
    /// its day index.
    virtual double predict() const = 0;
    void observe(Bit b) {
        advance(b);
        ++seen_;
    }
    virtual std::unique_ptr<Evaluator> clone() const = 0;

    /// Number of bits observed so far.
    std::int64_t seen() const noexcept { return seen_; }
    Day next_day() const noexcept { return seen_ + 1; }

protected:
    virtual void advance(Bit b) = 0;

private:
    std::int64_t seen_ = 0;
};

class Forecaster {
public:
    virtual ~Forecaster() = default;

    /// Fresh evaluator positioned at the empty prefix.
    virtual std::unique_ptr<Evaluator> start() const = 0;
    virtual Json descriptor() const = 0;

    /// Forecast after `prefix`. The default replays the prefix through an
    /// evaluator; closed-form forecasters override raw_forecast.
    Forecast forecast(const Prefix& prefix) const {
        return Forecast::checked(raw_forecast(prefix), prefix.next_day());
    }
    virtual double raw_forecast(const Prefix& prefix) const;

    /// Evaluator advanced through `prefix`.
    std::unique_ptr<Evaluator> start_at(const Prefix& prefix) const;
};

using ForecasterPtr = std::shared_ptr<const Forecaster>;

ForecasterPtr constant_forecaster(double c);

/// Conjugate i.i.d. Bayesian forecaster with a Beta(alpha, beta) prior:
/// (alpha + ones) / (alpha + beta + n).
ForecasterPtr beta_bernoulli_forecaster(double alpha, double beta);

/// Order-1 Markov Bayesian forecaster: independent Beta(alpha, beta) priors
/// on P(1 | previous bit) for each previous-bit state.
ForecasterPtr markov_forecaster(double alpha, double beta);

struct MixtureComponent {
    ForecasterPtr base;
    double weight = 1.0;
};

/// Bayesian mixture: predictive averages component forecasts under posterior
/// weights proportional to prior weight times marginal likelihood. Weights are
/// tracked in log space. Throws Error(prior_contradicted) when every
/// component assigns the observed prefix probability zero.
ForecasterPtr mixture_forecaster(std::vector<MixtureComponent> components);

/// Randomized forecaster: on day k it reports the forecast of the component
/// drawn with the k-th variate of the seeded stream. Draw k depends only on
/// (seed, k).
class MixedStrategyForecaster final : public Forecaster {
public:
    MixedStrategyForecaster(std::vector<ForecasterPtr> components, std::vector<double> weights,
                            std::uint64_t seed);

    std::size_t component_for_day(Day k) const;
    const std::vector<ForecasterPtr>& components() const noexcept { return components_; }

    std::unique_ptr<Evaluator> start() const override;
    Json descriptor() const override;

private:
    std::vector<ForecasterPtr> components_;
    std::vector<double> weights_;
    std::vector<double> cumulative_;  // normalized, last entry == 1
    std::uint64_t seed_;
};

std::shared_ptr<const MixedStrategyForecaster> mixed_strategy_forecaster(
    std::vector<ForecasterPtr> components, std::vector<double> weights, std::uint64_t seed);

/// Builds a forecaster from its descriptor, e.g.
/// {"type":"beta_bernoulli","alpha":1,"beta":1}. `path` is the JSON pointer
/// used in diagnostics.
ForecasterPtr forecaster_from_json(const Json& j, const std::string& path = "");

}  // namespace forecal
