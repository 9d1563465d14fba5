// Copyright 2026 The forecal Authors
// SPDX-License-Identifier: Apache-2.0

// Experiment configuration and the command implementations behind the CLI.
//
// A config is one JSON document with a strict schema (unknown keys are
// errors):
//
//   {
//     "schema_version": 1,
//     "forecaster": {"type": "beta_bernoulli", "alpha": 1, "beta": 1},
//     "nature": {"iid": {"theta": 0.5}},     // or {"file": {"path": "bits.txt"}},
//                                            //    {"adversarial": {}}, {"predictive": {}}
//     "rules": ["all", "high", "low"],
//     "horizon": 100000,
//     "checkpoints": [1024, 8192],           // optional; default powers of two
//     "tolerance": 0.02,                     // optional
//     "burn_in": 100,                        // optional
//     "seed": 42,                            // required by stochastic natures, mc, seeded games
//     "output_dir": "out",                   // optional
//     "runs": 200,                           // mc only
//     "game": {"player1": {"type": "random", "n": 100}, "rounds": 50, "cap_per_turn": 0}
//   }

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "forecal/audit.hpp"
#include "forecal/core.hpp"
#include "forecal/forecasters.hpp"
#include "forecal/json_fields.hpp"
#include "forecal/selection.hpp"

namespace forecal {

inline constexpr std::int64_t config_schema_version = 1;
inline constexpr double default_tolerance = 0.02;

struct NatureSpec {
    enum class Kind { iid, file, adversarial, predictive };
    Kind kind = Kind::adversarial;
    double theta = 0.5;           // iid
    std::filesystem::path path;   // file, as written in the config

    bool stochastic() const noexcept { return kind == Kind::iid || kind == Kind::predictive; }
};

struct GameSpec {
    Json player1;
    std::int64_t rounds = 1;
    std::int64_t cap_per_turn = 0;
};

struct ExperimentConfig {
    Json forecaster;  // canonical descriptor
    std::optional<NatureSpec> nature;
    Json rules = Json::array({"all", "high", "low"});  // canonical descriptors
    Day horizon = 0;
    std::vector<Day> checkpoints;  // empty: default schedule
    double tolerance = default_tolerance;
    std::int64_t burn_in = default_burn_in;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output_dir;
    std::optional<std::int64_t> runs;
    std::optional<GameSpec> game;

    std::filesystem::path base_dir;  // relative file paths resolve against it
};

/// Validates a parsed document. Throws Error(config) naming the field.
ExperimentConfig parse_config(const Json& j, const std::filesystem::path& base_dir = {});
/// Reads and validates a config file; JSON syntax errors report line and column.
ExperimentConfig load_config(const std::filesystem::path& path);
/// Canonical form: every default explicit, descriptors normalized.
Json config_to_json(const ExperimentConfig& config);

/// (day, forecast, outcome) rows of a third-party forecast log.
struct ExternalTrace {
    std::vector<double> forecasts;
    Prefix outcomes;
};

/// CSV with a header naming at least day, forecast and bit (or outcome);
/// other columns are ignored. Days must run 1, 2, ... Throws Error(input)
/// naming the row.
ExternalTrace parse_trace_csv(std::istream& in);

/// Options shared by the commands, mirroring the CLI flags.
struct CommandOptions {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<Day> horizon;
    bool quiet = false;
    unsigned workers = 1;
    // game / audit without a config
    std::string forecaster_json;
    std::string player1;  // fixed:<bits> | random:<n> | sampler:<n>
    std::optional<std::int64_t> rounds;
    std::string trace_path;
    std::string rules;  // comma list, see rules_from_list
    std::optional<double> tolerance;
};

/// run: trace.csv, audit.csv, verdict.json
void cmd_run(const CommandOptions& options, std::ostream& log);
/// game: transcript.jsonl
void cmd_game(const CommandOptions& options, std::ostream& log);
/// mc: report.json, runs.csv
void cmd_mc(const CommandOptions& options, std::ostream& log);
/// audit: audit.csv, verdict.json for an external trace
void cmd_audit(const CommandOptions& options, std::ostream& log);
/// sample: sample.txt, a predictive sample as a bit string
void cmd_sample(const CommandOptions& options, std::ostream& log);

}  // namespace forecal
