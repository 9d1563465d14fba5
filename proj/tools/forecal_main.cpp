// Copyright 2026 The forecal Authors
// SPDX-License-Identifier: Apache-2.0

// forecal command-line front end. Links only the C interface.

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "forecal/forecal.h"

namespace {

struct Flags {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> horizon;
    bool quiet = false;
    unsigned workers = 1;
    std::string forecaster;
    std::string p1;
    std::optional<std::int64_t> rounds;
    std::string trace;
    std::string rules;
    std::optional<double> tolerance;
};

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "Experiment config (JSON)");
    cmd->add_option("--out", f.out, "Output directory");
    cmd->add_option("--seed", f.seed, "Master seed (overrides the config)");
    cmd->add_option("--horizon", f.horizon, "Number of days (overrides the config)");
    cmd->add_flag("--quiet", f.quiet, "Suppress the summary on stdout");
}

forecal_options to_options(const Flags& f) {
    forecal_options o;
    forecal_options_init(&o);
    auto cstr = [](const std::string& s) { return s.empty() ? nullptr : s.c_str(); };
    o.config_path = cstr(f.config);
    o.out_dir = cstr(f.out);
    o.has_seed = f.seed.has_value();
    o.seed = f.seed.value_or(0);
    o.has_horizon = f.horizon.has_value();
    o.horizon = f.horizon.value_or(0);
    o.quiet = f.quiet;
    o.workers = f.workers;
    o.forecaster_json = cstr(f.forecaster);
    o.player1 = cstr(f.p1);
    o.has_rounds = f.rounds.has_value();
    o.rounds = f.rounds.value_or(0);
    o.trace_path = cstr(f.trace);
    o.rules = cstr(f.rules);
    o.has_tolerance = f.tolerance.has_value();
    o.tolerance = f.tolerance.value_or(0.0);
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"forecal: calibration laboratory for sequential binary forecasts"};
    app.require_subcommand(1);
    app.set_version_flag("--version", forecal_version());

    Flags f;
    auto* run = app.add_subcommand("run", "Audit a forecaster against the configured nature");
    add_common(run, f);

    auto* game = app.add_subcommand("game", "Play the Banach-Mazur game against a forecaster");
    add_common(game, f);
    game->add_option("--forecaster", f.forecaster, "Forecaster descriptor (JSON)");
    game->add_option("--p1", f.p1, "Player 1: fixed:<bits> | random:<n> | sampler:<n>");
    game->add_option("--rounds", f.rounds, "Number of rounds");

    auto* mc = app.add_subcommand("mc", "Monte Carlo calibration check on prior samples");
    add_common(mc, f);
    mc->add_option("--workers", f.workers, "Worker threads (results do not depend on it)")
        ->check(CLI::PositiveNumber);

    auto* audit = app.add_subcommand("audit", "Audit an external forecast/outcome trace");
    add_common(audit, f);
    audit->add_option("--trace", f.trace, "CSV with day, forecast and bit columns")->required();
    audit->add_option("--rules", f.rules, "Rules, e.g. all,high,low,parity(2:0)");
    audit->add_option("--tolerance", f.tolerance, "Verdict tolerance");

    auto* sample = app.add_subcommand("sample", "Draw a sequence from a forecaster's prior");
    add_common(sample, f);
    sample->add_option("--forecaster", f.forecaster, "Forecaster descriptor (JSON)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : FORECAL_ERR_CONFIG;
    }

    const forecal_options options = to_options(f);
    forecal_status status = FORECAL_ERR_INTERNAL;
    if (*run) status = forecal_cmd_run(&options);
    if (*game) status = forecal_cmd_game(&options);
    if (*mc) status = forecal_cmd_mc(&options);
    if (*audit) status = forecal_cmd_audit(&options);
    if (*sample) status = forecal_cmd_sample(&options);

    if (status != FORECAL_OK) std::fprintf(stderr, "forecal: %s\n", forecal_last_error());
    return static_cast<int>(status);
}
