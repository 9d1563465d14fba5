// Copyright 2026 The forecal Authors
// SPDX-License-Identifier: Apache-2.0

#include "forecal/forecal.h"

#include <cstdlib>
#include <cstring>
#include <iostream>
#include <new>
#include <sstream>
#include <string>

#include "forecal/adversary.hpp"
#include "forecal/audit.hpp"
#include "forecal/bayes_check.hpp"
#include "forecal/error.hpp"
#include "forecal/experiment.hpp"
#include "forecal/forecasters.hpp"
#include "forecal/game.hpp"

struct forecal_forecaster {
    forecal::ForecasterPtr impl;
};

struct forecal_audit {
    forecal::CalibrationAudit impl;
};

struct forecal_transcript {
    forecal::GameTranscript impl;
};

namespace {

thread_local std::string last_error;

forecal_status fail(forecal_status status, std::string message) {
    last_error = std::move(message);
    return status;
}

forecal_status status_of(forecal::ErrorKind kind) {
    return static_cast<forecal_status>(forecal::exit_code(kind));
}

template <class F>
forecal_status guarded(F&& body) noexcept {
    try {
        body();
        return FORECAL_OK;
    } catch (const forecal::Error& e) {
        return fail(status_of(e.kind()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(FORECAL_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(FORECAL_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(FORECAL_ERR_INTERNAL, "unknown exception");
    }
}

void require(bool ok, const char* what) {
    if (!ok) throw forecal::Error(forecal::ErrorKind::config, std::string("invalid argument: ") + what);
}

char* duplicate(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.data(), s.size());
    out[s.size()] = '\0';
    return out;
}

forecal::Json parse_json_arg(const char* text, const char* what) {
    try {
        return forecal::Json::parse(text);
    } catch (const forecal::Json::parse_error& e) {
        throw forecal::Error(forecal::ErrorKind::config, std::string(what) + ": " + e.what());
    }
}

std::vector<forecal::Day> checkpoint_list(const int64_t* checkpoints, size_t n) {
    require(checkpoints != nullptr || n == 0, "checkpoints");
    return std::vector<forecal::Day>(checkpoints, checkpoints + n);
}

forecal::CommandOptions command_options(const forecal_options* o) {
    require(o != nullptr, "options");
    forecal::CommandOptions c;
    auto str = [](const char* s) { return s ? std::string(s) : std::string(); };
    c.config_path = str(o->config_path);
    c.out_dir = str(o->out_dir);
    if (o->has_seed) c.seed = o->seed;
    if (o->has_horizon) c.horizon = o->horizon;
    c.quiet = o->quiet != 0;
    c.workers = o->workers;
    c.forecaster_json = str(o->forecaster_json);
    c.player1 = str(o->player1);
    if (o->has_rounds) c.rounds = o->rounds;
    c.trace_path = str(o->trace_path);
    c.rules = str(o->rules);
    if (o->has_tolerance) c.tolerance = o->tolerance;
    return c;
}

template <class Cmd>
forecal_status run_command(const forecal_options* options, Cmd cmd) noexcept {
    return guarded([&] {
        const auto o = command_options(options);
        cmd(o, std::cout);
        std::cout.flush();
    });
}

}  // namespace

extern "C" {

const char* forecal_version(void) { return "1.0.0"; }

const char* forecal_last_error(void) { return last_error.c_str(); }

void forecal_string_free(char* s) { std::free(s); }

forecal_status forecal_forecaster_create(const char* descriptor_json, forecal_forecaster** out) {
    return guarded([&] {
        require(descriptor_json != nullptr, "descriptor_json");
        require(out != nullptr, "out");
        auto f = forecal::forecaster_from_json(parse_json_arg(descriptor_json, "descriptor"));
        *out = new forecal_forecaster{std::move(f)};
    });
}

void forecal_forecaster_destroy(forecal_forecaster* f) { delete f; }

forecal_status forecal_forecaster_forecast(const forecal_forecaster* f, const char* prefix,
                                           double* out) {
    return guarded([&] {
        require(f != nullptr, "forecaster");
        require(prefix != nullptr, "prefix");
        require(out != nullptr, "out");
        *out = f->impl->forecast(forecal::parse_prefix(prefix)).value();
    });
}

forecal_status forecal_forecaster_descriptor(const forecal_forecaster* f, char** out_json) {
    return guarded([&] {
        require(f != nullptr, "forecaster");
        require(out_json != nullptr, "out_json");
        *out_json = duplicate(f->impl->descriptor().dump());
    });
}

forecal_status forecal_oakes_dawid_bit(double forecast, int* out_bit) {
    return guarded([&] {
        require(out_bit != nullptr, "out_bit");
        *out_bit = forecal::to_int(forecal::oakes_dawid_bit(forecal::Forecast(forecast)));
    });
}

forecal_status forecal_adversarial_stream(const forecal_forecaster* f, int64_t horizon,
                                          char** out_bits) {
    return guarded([&] {
        require(f != nullptr, "forecaster");
        require(out_bits != nullptr, "out_bits");
        *out_bits = duplicate(forecal::render_prefix(forecal::adversarial_stream(*f->impl, horizon)));
    });
}

forecal_status forecal_predictive_sample(const forecal_forecaster* f, int64_t horizon,
                                         uint64_t seed, char** out_bits) {
    return guarded([&] {
        require(f != nullptr, "forecaster");
        require(out_bits != nullptr, "out_bits");
        *out_bits = duplicate(
            forecal::render_prefix(forecal::predictive_sample(*f->impl, horizon, seed)));
    });
}

forecal_status forecal_audit_fixed(const forecal_forecaster* f, const char* outcomes,
                                   const char* rules, int64_t horizon,
                                   const int64_t* checkpoints, size_t n_checkpoints,
                                   forecal_audit** out) {
    return guarded([&] {
        require(f != nullptr, "forecaster");
        require(outcomes != nullptr, "outcomes");
        require(rules != nullptr, "rules");
        require(out != nullptr, "out");
        const auto rule_list = forecal::rules_from_list(rules);
        const auto days = checkpoint_list(checkpoints, n_checkpoints);
        forecal::FixedOutcomes nature(forecal::parse_prefix(outcomes));
        auto result = forecal::audit(*f->impl, nature, rule_list, horizon, days);
        *out = new forecal_audit{std::move(result)};
    });
}

forecal_status forecal_audit_adversarial(const forecal_forecaster* f, const char* rules,
                                         int64_t horizon, const int64_t* checkpoints,
                                         size_t n_checkpoints, forecal_audit** out) {
    return guarded([&] {
        require(f != nullptr, "forecaster");
        require(rules != nullptr, "rules");
        require(out != nullptr, "out");
        const auto rule_list = forecal::rules_from_list(rules);
        const auto days = checkpoint_list(checkpoints, n_checkpoints);
        forecal::AdversarialOutcomes nature;
        auto result = forecal::audit(*f->impl, nature, rule_list, horizon, days);
        *out = new forecal_audit{std::move(result)};
    });
}

void forecal_audit_destroy(forecal_audit* a) { delete a; }

size_t forecal_audit_rule_count(const forecal_audit* a) {
    return a ? a->impl.rule_names.size() : 0;
}

forecal_status forecal_audit_rule(const forecal_audit* a, size_t index, const char** name,
                                  int64_t* count, double* sum) {
    return guarded([&] {
        require(a != nullptr, "audit");
        require(index < a->impl.rule_names.size(), "index");
        if (name) *name = a->impl.rule_names[index].c_str();
        if (count) *count = a->impl.stats[index].count;
        if (sum) *sum = a->impl.stats[index].sum;
    });
}

forecal_status forecal_audit_csv(const forecal_audit* a, char** out_csv) {
    return guarded([&] {
        require(a != nullptr, "audit");
        require(out_csv != nullptr, "out_csv");
        std::ostringstream ss;
        forecal::write_audit_csv(ss, a->impl);
        *out_csv = duplicate(ss.str());
    });
}

forecal_status forecal_audit_verdict_json(const forecal_audit* a, double tolerance,
                                          int64_t burn_in, char** out_json) {
    return guarded([&] {
        require(a != nullptr, "audit");
        require(out_json != nullptr, "out_json");
        require(tolerance > 0.0, "tolerance");
        require(burn_in >= 0, "burn_in");
        *out_json = duplicate(
            forecal::verdict_to_json(forecal::verdict(a->impl, tolerance, burn_in)).dump());
    });
}

forecal_status forecal_game_play(const forecal_forecaster* f, const char* player1_json,
                                 int64_t rounds, uint64_t seed, int64_t cap_per_turn,
                                 forecal_transcript** out) {
    return guarded([&] {
        require(f != nullptr, "forecaster");
        require(player1_json != nullptr, "player1_json");
        require(out != nullptr, "out");
        const auto p1 = forecal::player1_from_json(parse_json_arg(player1_json, "player1"), seed);
        forecal::GameOptions options;
        options.rounds = rounds;
        options.cap_per_turn = cap_per_turn;
        options.seed = seed;
        *out = new forecal_transcript{forecal::play_game(*f->impl, *p1, options)};
    });
}

void forecal_transcript_destroy(forecal_transcript* t) { delete t; }

size_t forecal_transcript_move_count(const forecal_transcript* t) {
    return t ? t->impl.moves.size() : 0;
}

forecal_status forecal_transcript_move(const forecal_transcript* t, size_t index, int* player,
                                       int64_t* length, int64_t* day_count_after,
                                       int* condition) {
    return guarded([&] {
        require(t != nullptr, "transcript");
        require(index < t->impl.moves.size(), "index");
        const auto& m = t->impl.moves[index];
        if (player) *player = m.player;
        if (length) *length = static_cast<int64_t>(m.string.size());
        if (day_count_after) *day_count_after = m.day_count_after;
        if (condition) {
            *condition = !m.condition ? FORECAL_CONDITION_NONE
                         : *m.condition == forecal::StopCondition::low_mean_high
                             ? FORECAL_CONDITION_LOW_MEAN_HIGH
                             : FORECAL_CONDITION_HIGH_MEAN_LOW;
        }
    });
}

forecal_status forecal_transcript_sequence(const forecal_transcript* t, char** out_bits) {
    return guarded([&] {
        require(t != nullptr, "transcript");
        require(out_bits != nullptr, "out_bits");
        *out_bits = duplicate(forecal::render_prefix(forecal::transcript_to_sequence(t->impl)));
    });
}

forecal_status forecal_transcript_jsonl(const forecal_transcript* t, char** out) {
    return guarded([&] {
        require(t != nullptr, "transcript");
        require(out != nullptr, "out");
        std::ostringstream ss;
        forecal::write_transcript_jsonl(ss, t->impl);
        *out = duplicate(ss.str());
    });
}

forecal_status forecal_mc_check(const forecal_forecaster* f, const char* rules, int64_t horizon,
                                int64_t runs, double tolerance, uint64_t seed, unsigned workers,
                                char** out_report_json) {
    return guarded([&] {
        require(f != nullptr, "forecaster");
        require(rules != nullptr, "rules");
        require(out_report_json != nullptr, "out_report_json");
        forecal::McOptions options;
        options.horizon = horizon;
        options.runs = runs;
        options.tolerance = tolerance;
        options.master_seed = seed;
        options.workers = workers;
        const auto rule_list = forecal::rules_from_list(rules);
        const auto report = forecal::dawid_mc_check(*f->impl, rule_list, options);
        *out_report_json = duplicate(forecal::report_to_json(report).dump());
    });
}

void forecal_options_init(forecal_options* options) {
    if (!options) return;
    *options = forecal_options{};
    options->workers = 1;
}

forecal_status forecal_cmd_run(const forecal_options* options) {
    return run_command(options, forecal::cmd_run);
}

forecal_status forecal_cmd_game(const forecal_options* options) {
    return run_command(options, forecal::cmd_game);
}

forecal_status forecal_cmd_mc(const forecal_options* options) {
    return run_command(options, forecal::cmd_mc);
}

forecal_status forecal_cmd_audit(const forecal_options* options) {
    return run_command(options, forecal::cmd_audit);
}

forecal_status forecal_cmd_sample(const forecal_options* options) {
    return run_command(options, forecal::cmd_sample);
}

}  // extern "C"
