// Copyright 2026 The forecal Authors
// SPDX-License-Identifier: Apache-2.0

// Banach-Mazur game on Cantor space with the basis {B_w : w a finite binary
// string}. A move is the string that extends the current prefix, so nested
// basis sets are concatenated strings. Player 1 is an arbitrary strategy;
// player 2 plays the turn from adversary.hpp, which leaves the high/low
// calibration of the forecaster off by at least 0.25 at the end of each of
// its moves.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "forecal/adversary.hpp"
#include "forecal/core.hpp"
#include "forecal/forecasters.hpp"

namespace forecal {

class Player1Strategy {
public:
    virtual ~Player1Strategy() = default;

    /// Nonempty extension of `current`; `at_current` is the forecaster's
    /// evaluator positioned at `current`.
    virtual Prefix next_string(const Prefix& current, const Evaluator& at_current) const = 0;
    virtual Json descriptor() const = 0;
};

using Player1Ptr = std::shared_ptr<const Player1Strategy>;

/// Always plays `string` (nonempty).
Player1Ptr p1_fixed(Prefix string);
/// n fair coin flips; the bit for absolute day k depends only on (seed, k).
Player1Ptr p1_random(std::int64_t n, std::uint64_t seed);
/// n bits, each drawn as 1 with the forecaster's own probability for that day.
Player1Ptr p1_predictive_sampler(std::int64_t n, std::uint64_t seed);

/// {"type":"fixed","string":"101"}, {"type":"random","n":100} or
/// {"type":"predictive_sampler","n":100}; seeded strategies take `seed`.
Player1Ptr player1_from_json(const Json& j, std::uint64_t seed, const std::string& path = "");

struct Move {
    int player = 1;
    Prefix string;
    std::optional<StopCondition> condition;  // player 2 only
    Day day_count_after = 0;
    HighLowStats stats_after;  // cumulative over the whole realized prefix
};

struct GameTranscript {
    Json forecaster;
    Json player1;
    std::uint64_t seed = 0;
    std::int64_t rounds = 0;
    std::vector<Move> moves;
};

struct GameOptions {
    std::int64_t rounds = 1;
    /// Extra per-turn limit for player 2; 0 means the termination bound alone.
    std::int64_t cap_per_turn = 0;
    /// Recompute the cumulative statistics from scratch before every player-2 turn.
    bool verify_stats = false;
    std::uint64_t seed = 0;  // recorded in the transcript
};

/// Plays `options.rounds` rounds (one player-1 move then one player-2 move).
/// Throws Error(config) when player 1 returns an empty string and
/// Error(cap_exceeded) when a player-2 turn runs over its cap.
GameTranscript play_game(const Forecaster& forecaster, const Player1Strategy& p1,
                         const GameOptions& options);

/// Concatenation of the move strings, i.e. the realized prefix.
Prefix transcript_to_sequence(const GameTranscript& t);

/// One JSON object per move and line: move_index, player, string,
/// day_count_after, low_count, low_mean, high_count, high_mean, condition.
/// Means of empty buckets and player-1 conditions are null.
void write_transcript_jsonl(std::ostream& out, const GameTranscript& t);

}  // namespace forecal
