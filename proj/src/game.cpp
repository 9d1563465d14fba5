// Copyright 2026 The forecal Authors
// SPDX-License-Identifier: Apache-2.0

#include "forecal/game.hpp"

#include <algorithm>
#include <ostream>

#include "forecal/error.hpp"
#include "forecal/rng.hpp"

namespace forecal {

namespace {

class FixedPlayer final : public Player1Strategy {
public:
    explicit FixedPlayer(Prefix s) : s_(std::move(s)) {}
    Prefix next_string(const Prefix&, const Evaluator&) const override { return s_; }
    Json descriptor() const override { return {{"type", "fixed"}, {"string", render_prefix(s_)}}; }

private:
    Prefix s_;
};

class RandomPlayer final : public Player1Strategy {
public:
    RandomPlayer(std::int64_t n, std::uint64_t seed) : n_(n), key_(rng::derive_key(seed, 1)) {}

    Prefix next_string(const Prefix& current, const Evaluator&) const override {
        Prefix out;
        for (std::int64_t i = 0; i < n_; ++i) {
            const auto day = static_cast<std::uint64_t>(current.next_day() + i);
            out.push_back(bit_from((rng::stream_value(key_, day) >> 63) != 0));
        }
        return out;
    }
    Json descriptor() const override { return {{"type", "random"}, {"n", n_}}; }

private:
    std::int64_t n_;
    std::uint64_t key_;
};

class PredictiveSampler final : public Player1Strategy {
public:
    PredictiveSampler(std::int64_t n, std::uint64_t seed) : n_(n), key_(rng::derive_key(seed, 2)) {}

    Prefix next_string(const Prefix&, const Evaluator& at_current) const override {
        auto ev = at_current.clone();
        Prefix out;
        for (std::int64_t i = 0; i < n_; ++i) {
            const Day day = ev->next_day();
            const Forecast pi = Forecast::checked(ev->predict(), day);
            const Bit b = bit_from(rng::stream_uniform(key_, static_cast<std::uint64_t>(day)) <
                                   pi.value());
            out.push_back(b);
            ev->observe(b);
        }
        return out;
    }
    Json descriptor() const override { return {{"type", "predictive_sampler"}, {"n", n_}}; }

private:
    std::int64_t n_;
    std::uint64_t key_;
};

void check_length(std::int64_t n) {
    if (n < 1) throw Error(ErrorKind::config, "n: player-1 strings need at least one bit");
}

}  // namespace

Player1Ptr p1_fixed(Prefix string) {
    if (string.empty()) throw Error(ErrorKind::config, "string: fixed player-1 string is empty");
    return std::make_shared<FixedPlayer>(std::move(string));
}

Player1Ptr p1_random(std::int64_t n, std::uint64_t seed) {
    check_length(n);
    return std::make_shared<RandomPlayer>(n, seed);
}

Player1Ptr p1_predictive_sampler(std::int64_t n, std::uint64_t seed) {
    check_length(n);
    return std::make_shared<PredictiveSampler>(n, seed);
}

Player1Ptr player1_from_json(const Json& j, std::uint64_t seed, const std::string& path) {
    namespace jf = json_fields;
    jf::require_object(j, path);
    const std::string type = jf::get_string(j, path, "type");
    if (type == "fixed") {
        jf::check_keys(j, path, {"type", "string"});
        const std::string s = jf::get_string(j, path, "string");
        if (s.empty()) jf::fail(jf::child(path, "string"), "must be nonempty");
        try {
            return p1_fixed(parse_prefix(s));
        } catch (const Error& e) {
            jf::fail(jf::child(path, "string"), e.what());
        }
    }
    if (type == "random" || type == "predictive_sampler") {
        jf::check_keys(j, path, {"type", "n"});
        const auto n = jf::get_int(j, path, "n");
        if (n < 1) jf::fail(jf::child(path, "n"), "must be >= 1");
        return type == "random" ? p1_random(n, seed) : p1_predictive_sampler(n, seed);
    }
    jf::fail(jf::child(path, "type"), "unknown player-1 strategy '" + type + "'");
}

GameTranscript play_game(const Forecaster& forecaster, const Player1Strategy& p1,
                         const GameOptions& options) {
    if (options.rounds < 1) throw Error(ErrorKind::config, "rounds: must be >= 1");
    if (options.cap_per_turn < 0) throw Error(ErrorKind::config, "cap_per_turn: must be >= 0");

    GameTranscript t;
    t.forecaster = forecaster.descriptor();
    t.player1 = p1.descriptor();
    t.seed = options.seed;
    t.moves.reserve(static_cast<std::size_t>(2 * options.rounds));

    auto ev = forecaster.start();
    Prefix realized;
    HighLowStats stats;

    for (std::int64_t round = 0; round < options.rounds; ++round) {
        Move m1;
        m1.player = 1;
        m1.string = p1.next_string(realized, *ev);
        if (m1.string.empty()) {
            throw Error(ErrorKind::config, "player 1 returned an empty string in round " +
                                               std::to_string(round + 1));
        }
        for (Bit b : m1.string.bits()) {
            stats = fold_day(stats, Forecast::checked(ev->predict(), ev->next_day()), b);
            ev->observe(b);
        }
        realized.append(m1.string);
        m1.day_count_after = static_cast<Day>(realized.size());
        m1.stats_after = stats;
        t.moves.push_back(std::move(m1));

        if (options.verify_stats && high_low_stats(forecaster, realized) != stats) {
            throw Error(ErrorKind::input, "game statistics diverged from the realized prefix");
        }
        std::int64_t cap = termination_bound(static_cast<std::int64_t>(realized.size()));
        if (options.cap_per_turn > 0) cap = std::min(cap, options.cap_per_turn);

        TurnOutcome turn = player2_turn(*ev, stats, cap);
        stats = turn.stats_after;
        realized.append(turn.extension);

        Move m2;
        m2.player = 2;
        m2.string = std::move(turn.extension);
        m2.condition = turn.condition;
        m2.day_count_after = static_cast<Day>(realized.size());
        m2.stats_after = stats;
        t.moves.push_back(std::move(m2));
        t.rounds = round + 1;
    }
    return t;
}

Prefix transcript_to_sequence(const GameTranscript& t) {
    Prefix out;
    for (const auto& m : t.moves) out.append(m.string);
    return out;
}

void write_transcript_jsonl(std::ostream& out, const GameTranscript& t) {
    using Record = nlohmann::ordered_json;
    auto mean_or_null = [](const BucketStats& s) { return s.count > 0 ? Record(s.mean()) : Record(); };
    for (std::size_t i = 0; i < t.moves.size(); ++i) {
        const Move& m = t.moves[i];
        Record rec = {{"move_index", i},
                    {"player", m.player},
                    {"string", render_prefix(m.string)},
                    {"day_count_after", m.day_count_after},
                    {"low_count", m.stats_after.low.count},
                    {"low_mean", mean_or_null(m.stats_after.low)},
                    {"high_count", m.stats_after.high.count},
                    {"high_mean", mean_or_null(m.stats_after.high)},
                    {"condition", m.condition ? Record(to_string(*m.condition)) : Record()}};
        out << rec.dump() << '\n';
    }
}

}  // namespace forecal
