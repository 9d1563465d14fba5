// Copyright 2026 The forecal Authors
// SPDX-License-Identifier: Apache-2.0

#include "forecal/experiment.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "forecal/adversary.hpp"
#include "forecal/bayes_check.hpp"
#include "forecal/error.hpp"
#include "forecal/game.hpp"

namespace forecal {

namespace fs = std::filesystem;
namespace jf = json_fields;

// ---------------------------------------------------------------------------
// Config

namespace {

NatureSpec parse_nature(const Json& j, const fs::path& base_dir) {
    const std::string path = "/nature";
    jf::check_keys(j, path, {"iid", "file", "adversarial", "predictive"});
    if (j.size() != 1) jf::fail(path, "exactly one nature must be given");
    const auto& [name, body] = *j.items().begin();
    const std::string bpath = jf::child(path, name);
    NatureSpec n;
    if (name == "iid") {
        jf::check_keys(body, bpath, {"theta"});
        n.kind = NatureSpec::Kind::iid;
        n.theta = jf::get_real(body, bpath, "theta");
        if (!Forecast::valid(n.theta)) jf::fail(jf::child(bpath, "theta"), "must lie in [0,1]");
    } else if (name == "file") {
        jf::check_keys(body, bpath, {"path"});
        n.kind = NatureSpec::Kind::file;
        n.path = jf::get_string(body, bpath, "path");
        if (n.path.empty()) jf::fail(jf::child(bpath, "path"), "must be nonempty");
        if (!fs::exists(base_dir / n.path)) {
            jf::fail(jf::child(bpath, "path"), "file not found: " + (base_dir / n.path).string());
        }
    } else if (name == "adversarial") {
        jf::check_keys(body, bpath, {});
        n.kind = NatureSpec::Kind::adversarial;
    } else {
        jf::check_keys(body, bpath, {});
        n.kind = NatureSpec::Kind::predictive;
    }
    return n;
}

Json nature_to_json(const NatureSpec& n) {
    switch (n.kind) {
        case NatureSpec::Kind::iid: return {{"iid", {{"theta", n.theta}}}};
        case NatureSpec::Kind::file: return {{"file", {{"path", n.path.generic_string()}}}};
        case NatureSpec::Kind::adversarial: return {{"adversarial", Json::object()}};
        case NatureSpec::Kind::predictive: return {{"predictive", Json::object()}};
    }
    return {};
}

Json canonical_rules(const std::vector<RulePtr>& rules) {
    Json out = Json::array();
    for (const auto& r : rules) out.push_back(r->descriptor());
    return out;
}

}  // namespace

ExperimentConfig parse_config(const Json& j, const fs::path& base_dir) {
    const std::string root;
    jf::check_keys(j, root,
                   {"schema_version", "forecaster", "nature", "rules", "horizon", "checkpoints",
                    "tolerance", "burn_in", "seed", "output_dir", "runs", "game"});
    ExperimentConfig c;
    c.base_dir = base_dir;

    const auto version = jf::get_int(j, root, "schema_version");
    if (version != config_schema_version) {
        jf::fail("/schema_version", "unsupported schema version " + std::to_string(version));
    }
    c.forecaster = forecaster_from_json(jf::required(j, root, "forecaster"), "/forecaster")
                       ->descriptor();
    if (j.contains("nature")) c.nature = parse_nature(j.at("nature"), base_dir);
    if (j.contains("rules")) c.rules = canonical_rules(rules_from_json(j.at("rules"), "/rules"));

    if (auto h = jf::opt_int(j, root, "horizon")) {
        if (*h < 1) jf::fail("/horizon", "must be >= 1");
        c.horizon = *h;
    }
    if (j.contains("checkpoints")) {
        const Json& arr = j.at("checkpoints");
        if (!arr.is_array()) jf::fail("/checkpoints", "expected an array of days");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string ipath = jf::child("/checkpoints", i);
            const Day d = jf::as_int(arr[i], ipath);
            if (d < 1) jf::fail(ipath, "days start at 1");
            if (c.horizon > 0 && d > c.horizon) jf::fail(ipath, "beyond the horizon");
            if (!c.checkpoints.empty() && d <= c.checkpoints.back()) {
                jf::fail(ipath, "checkpoints must be strictly increasing");
            }
            c.checkpoints.push_back(d);
        }
    }
    if (auto t = jf::opt_real(j, root, "tolerance")) {
        if (!(*t > 0.0)) jf::fail("/tolerance", "must be > 0");
        c.tolerance = *t;
    }
    if (auto b = jf::opt_int(j, root, "burn_in")) {
        if (*b < 0) jf::fail("/burn_in", "must be >= 0");
        c.burn_in = *b;
    }
    c.seed = jf::opt_uint64(j, root, "seed");
    if (j.contains("output_dir")) c.output_dir = jf::as_string(j.at("output_dir"), "/output_dir");
    if (auto r = jf::opt_int(j, root, "runs")) {
        if (*r < 1) jf::fail("/runs", "must be >= 1");
        c.runs = *r;
    }
    if (j.contains("game")) {
        const Json& g = j.at("game");
        jf::check_keys(g, "/game", {"player1", "rounds", "cap_per_turn"});
        GameSpec spec;
        spec.player1 = player1_from_json(jf::required(g, "/game", "player1"), 0, "/game/player1")
                           ->descriptor();
        spec.rounds = jf::opt_int(g, "/game", "rounds").value_or(1);
        if (spec.rounds < 1) jf::fail("/game/rounds", "must be >= 1");
        spec.cap_per_turn = jf::opt_int(g, "/game", "cap_per_turn").value_or(0);
        if (spec.cap_per_turn < 0) jf::fail("/game/cap_per_turn", "must be >= 0");
        c.game = spec;
    }
    return c;
}

ExperimentConfig load_config(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::config, "cannot read config file " + path.string());
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw Error(ErrorKind::config, path.string() + ": " + e.what());
    }
    try {
        return parse_config(j, path.parent_path());
    } catch (const Error& e) {
        throw Error(e.kind(), path.string() + ": " + e.what());
    }
}

Json config_to_json(const ExperimentConfig& c) {
    Json j = {{"schema_version", config_schema_version},
              {"forecaster", c.forecaster},
              {"rules", c.rules},
              {"tolerance", c.tolerance},
              {"burn_in", c.burn_in}};
    if (c.nature) j["nature"] = nature_to_json(*c.nature);
    if (c.horizon > 0) j["horizon"] = c.horizon;
    if (!c.checkpoints.empty()) j["checkpoints"] = c.checkpoints;
    if (c.seed) j["seed"] = *c.seed;
    if (c.output_dir) j["output_dir"] = *c.output_dir;
    if (c.runs) j["runs"] = *c.runs;
    if (c.game) {
        j["game"] = {{"player1", c.game->player1},
                     {"rounds", c.game->rounds},
                     {"cap_per_turn", c.game->cap_per_turn}};
    }
    return j;
}

// ---------------------------------------------------------------------------
// External traces

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

[[noreturn]] void trace_error(std::size_t line, const std::string& message) {
    throw Error(ErrorKind::input, "trace line " + std::to_string(line) + ": " + message);
}

}  // namespace

ExternalTrace parse_trace_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::input, "trace: missing header row");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_csv_line(line);
    constexpr auto npos = std::numeric_limits<std::size_t>::max();
    std::size_t day_col = npos, forecast_col = npos, bit_col = npos;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "day") day_col = i;
        if (header[i] == "forecast") forecast_col = i;
        if (header[i] == "bit" || header[i] == "outcome") bit_col = i;
    }
    if (day_col == npos || forecast_col == npos || bit_col == npos) {
        throw Error(ErrorKind::input, "trace: header must name day, forecast and bit columns");
    }

    ExternalTrace trace;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size()) trace_error(line_no, "wrong number of fields");

        const std::string& day_text = fields[day_col];
        long long day = 0;
        auto [dend, dec] = std::from_chars(day_text.data(), day_text.data() + day_text.size(), day);
        if (dec != std::errc() || dend != day_text.data() + day_text.size()) {
            trace_error(line_no, "malformed day '" + day_text + "'");
        }
        if (day != static_cast<long long>(trace.outcomes.size()) + 1) {
            trace_error(line_no, "days must be contiguous from 1");
        }

        const std::string& f_text = fields[forecast_col];
        double p = 0.0;
        auto [fend, fec] = std::from_chars(f_text.data(), f_text.data() + f_text.size(), p);
        if (fec != std::errc() || fend != f_text.data() + f_text.size()) {
            trace_error(line_no, "malformed forecast '" + f_text + "'");
        }
        if (!Forecast::valid(p)) trace_error(line_no, "forecast outside [0,1]");

        const std::string& b_text = fields[bit_col];
        if (b_text != "0" && b_text != "1") trace_error(line_no, "outcome must be 0 or 1");

        trace.forecasts.push_back(p);
        trace.outcomes.push_back(bit_from(b_text == "1"));
    }
    if (trace.forecasts.empty()) throw Error(ErrorKind::input, "trace: no data rows");
    return trace;
}

// ---------------------------------------------------------------------------
// Commands

namespace {

/// Forecasts read back from a log; the forecaster that produced them is a
/// black box.
class ReplayForecaster final : public Forecaster {
public:
    explicit ReplayForecaster(std::vector<double> forecasts) : forecasts_(std::move(forecasts)) {}

    class Eval final : public Evaluator {
    public:
        explicit Eval(const std::vector<double>* f) : f_(f) {}
        double predict() const override {
            const auto i = static_cast<std::size_t>(seen());
            return i < f_->size() ? (*f_)[i] : std::numeric_limits<double>::quiet_NaN();
        }
        std::unique_ptr<Evaluator> clone() const override { return std::make_unique<Eval>(*this); }

    protected:
        void advance(Bit) override {}

    private:
        const std::vector<double>* f_;
    };

    std::unique_ptr<Evaluator> start() const override { return std::make_unique<Eval>(&forecasts_); }
    Json descriptor() const override { return {{"type", "trace"}}; }

private:
    std::vector<double> forecasts_;
};

ExperimentConfig resolve_config(const CommandOptions& o, bool required) {
    ExperimentConfig c;
    if (!o.config_path.empty()) {
        c = load_config(o.config_path);
    } else if (required) {
        throw Error(ErrorKind::config, "this command requires --config");
    }
    if (o.seed) c.seed = o.seed;
    if (o.horizon) {
        if (*o.horizon < 1) throw Error(ErrorKind::config, "--horizon: must be >= 1");
        c.horizon = *o.horizon;
    }
    if (o.tolerance) {
        if (!(*o.tolerance > 0.0)) throw Error(ErrorKind::config, "--tolerance: must be > 0");
        c.tolerance = *o.tolerance;
    }
    if (!c.checkpoints.empty() && c.horizon > 0 && c.checkpoints.back() > c.horizon) {
        throw Error(ErrorKind::config, "checkpoints extend beyond the horizon");
    }
    return c;
}

ForecasterPtr resolve_forecaster(const CommandOptions& o, const ExperimentConfig& c) {
    if (!o.forecaster_json.empty()) {
        Json j;
        try {
            j = Json::parse(o.forecaster_json);
        } catch (const Json::parse_error& e) {
            throw Error(ErrorKind::config, std::string("--forecaster: ") + e.what());
        }
        return forecaster_from_json(j, "--forecaster");
    }
    if (c.forecaster.is_null()) throw Error(ErrorKind::config, "no forecaster given");
    return forecaster_from_json(c.forecaster, "/forecaster");
}

Day require_horizon(const ExperimentConfig& c) {
    if (c.horizon < 1) throw Error(ErrorKind::config, "horizon: missing (set it in the config or with --horizon)");
    return c.horizon;
}

std::uint64_t require_seed(const ExperimentConfig& c, const char* why) {
    if (!c.seed) throw Error(ErrorKind::config, std::string("seed: required ") + why);
    return *c.seed;
}

fs::path output_dir(const CommandOptions& o, const ExperimentConfig& c) {
    if (!o.out_dir.empty()) return o.out_dir;
    if (c.output_dir) return *c.output_dir;
    return ".";
}

void write_file(const fs::path& dir, const std::string& name, const std::string& content) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::io, "cannot create directory " + dir.string() + ": " + ec.message());
    const fs::path path = dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot open " + path.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::io, "write failed for " + path.string());
}

Prefix read_bit_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
    try {
        return parse_prefix(text);
    } catch (const Error& e) {
        throw Error(ErrorKind::input, path.string() + ": " + e.what());
    }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

void log_verdict(std::ostream& log, const AuditVerdict& v) {
    for (const auto& r : v.rules) {
        log << r.rule << ": count=" << r.count << " mean=" << format_real(r.final_mean)
            << " max_tail=" << format_real(r.max_tail_abs_mean) << " " << to_string(r.status)
            << '\n';
    }
}

Player1Ptr parse_player1_shorthand(const std::string& text, std::uint64_t seed) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw Error(ErrorKind::config, "--p1: expected fixed:<bits>, random:<n> or sampler:<n>");
    }
    const std::string kind = text.substr(0, colon);
    const std::string arg = text.substr(colon + 1);
    if (kind == "fixed") return p1_fixed(parse_prefix(arg));
    std::int64_t n = 0;
    auto [end, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), n);
    if (ec != std::errc() || end != arg.data() + arg.size()) {
        throw Error(ErrorKind::config, "--p1: bad length '" + arg + "'");
    }
    if (kind == "random") return p1_random(n, seed);
    if (kind == "sampler" || kind == "predictive_sampler") return p1_predictive_sampler(n, seed);
    throw Error(ErrorKind::config, "--p1: unknown strategy '" + kind + "'");
}

}  // namespace

void cmd_run(const CommandOptions& o, std::ostream& log) {
    const ExperimentConfig c = resolve_config(o, true);
    if (!c.nature) throw Error(ErrorKind::config, "/nature: run requires a nature");
    const Day horizon = require_horizon(c);
    const auto forecaster = resolve_forecaster(o, c);
    const auto rules = rules_from_json(c.rules, "/rules");

    std::unique_ptr<OutcomeSource> nature;
    switch (c.nature->kind) {
        case NatureSpec::Kind::iid:
            nature = std::make_unique<IidOutcomes>(c.nature->theta,
                                                   require_seed(c, "by the iid nature"));
            break;
        case NatureSpec::Kind::predictive:
            nature = std::make_unique<PredictiveOutcomes>(require_seed(c, "by the predictive nature"));
            break;
        case NatureSpec::Kind::adversarial:
            nature = std::make_unique<AdversarialOutcomes>();
            break;
        case NatureSpec::Kind::file:
            nature = std::make_unique<FixedOutcomes>(read_bit_file(c.base_dir / c.nature->path));
            break;
    }

    std::ostringstream trace;
    trace << "day,bit,forecast,discrepancy\n";
    const auto result = audit(*forecaster, *nature, rules, horizon, c.checkpoints,
                              [&](const DayRecord& r) {
                                  trace << r.day << ',' << to_int(r.outcome) << ','
                                        << format_real(r.forecast.value()) << ','
                                        << format_real(r.discrepancy) << '\n';
                              });
    std::ostringstream audit_csv;
    write_audit_csv(audit_csv, result);
    const AuditVerdict v = verdict(result, c.tolerance, c.burn_in);

    const fs::path dir = output_dir(o, c);
    write_file(dir, "trace.csv", trace.str());
    write_file(dir, "audit.csv", audit_csv.str());
    write_file(dir, "verdict.json", dump_json(verdict_to_json(v)));
    if (!o.quiet) log_verdict(log, v);
}

void cmd_game(const CommandOptions& o, std::ostream& log) {
    const ExperimentConfig c = resolve_config(o, false);
    const auto forecaster = resolve_forecaster(o, c);

    GameOptions g;
    if (c.game) {
        g.rounds = c.game->rounds;
        g.cap_per_turn = c.game->cap_per_turn;
    }
    if (o.rounds) g.rounds = *o.rounds;

    const bool from_flag = !o.player1.empty();
    if (!from_flag && !c.game) {
        throw Error(ErrorKind::config, "no player-1 strategy (use --p1 or the game section)");
    }
    auto build_player1 = [&](std::uint64_t seed) {
        return from_flag ? parse_player1_shorthand(o.player1, seed)
                         : player1_from_json(c.game->player1, seed, "/game/player1");
    };
    const bool seeded = build_player1(0)->descriptor().at("type") != "fixed";
    g.seed = seeded ? require_seed(c, "by seeded player-1 strategies") : c.seed.value_or(0);
    const Player1Ptr p1 = build_player1(g.seed);

    const GameTranscript t = play_game(*forecaster, *p1, g);
    std::ostringstream out;
    write_transcript_jsonl(out, t);
    write_file(output_dir(o, c), "transcript.jsonl", out.str());
    if (!o.quiet) {
        const Move& last = t.moves.back();
        log << "rounds=" << t.rounds << " days=" << last.day_count_after
            << " low_count=" << last.stats_after.low.count
            << " low_mean=" << format_real(last.stats_after.low.mean())
            << " high_count=" << last.stats_after.high.count
            << " high_mean=" << format_real(last.stats_after.high.mean()) << '\n';
    }
}

void cmd_mc(const CommandOptions& o, std::ostream& log) {
    const ExperimentConfig c = resolve_config(o, true);
    const auto forecaster = resolve_forecaster(o, c);
    const auto rules = rules_from_json(c.rules, "/rules");
    McOptions mc;
    mc.horizon = require_horizon(c);
    if (!c.runs) throw Error(ErrorKind::config, "/runs: required by mc");
    mc.runs = *c.runs;
    mc.tolerance = c.tolerance;
    mc.master_seed = require_seed(c, "by mc");
    mc.min_count = c.burn_in;
    mc.workers = std::max(1u, o.workers);

    const McReport report = dawid_mc_check(*forecaster, rules, mc);
    std::ostringstream runs_csv;
    write_runs_csv(runs_csv, report);
    const fs::path dir = output_dir(o, c);
    write_file(dir, "report.json", dump_json(report_to_json(report)));
    write_file(dir, "runs.csv", runs_csv.str());
    if (!o.quiet) {
        for (const auto& r : report.rules) {
            log << r.rule << ": evaluated=" << r.evaluated_runs
                << " insufficient=" << r.insufficient_runs << " pass_fraction="
                << (r.pass_fraction ? format_real(*r.pass_fraction) : std::string("n/a"))
                << " worst=" << format_real(r.worst_abs_mean) << '\n';
        }
    }
}

void cmd_audit(const CommandOptions& o, std::ostream& log) {
    if (o.trace_path.empty()) throw Error(ErrorKind::config, "audit requires --trace");
    const ExperimentConfig c = resolve_config(o, false);

    std::ifstream in(o.trace_path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot read trace " + o.trace_path);
    ExternalTrace trace = parse_trace_csv(in);

    const auto rows = static_cast<Day>(trace.forecasts.size());
    Day horizon = rows;
    if (o.horizon) {
        if (*o.horizon > rows) {
            throw Error(ErrorKind::input, "trace has " + std::to_string(rows) +
                                              " rows, fewer than the requested horizon");
        }
        horizon = *o.horizon;
    }
    const auto rules = !o.rules.empty() ? rules_from_list(o.rules) : rules_from_json(c.rules, "/rules");

    std::vector<Day> checkpoints;
    for (Day d : c.checkpoints) {
        if (d <= horizon) checkpoints.push_back(d);
    }
    ReplayForecaster forecaster(std::move(trace.forecasts));
    FixedOutcomes nature(std::move(trace.outcomes));
    const auto result = audit(forecaster, nature, rules, horizon, checkpoints);
    std::ostringstream audit_csv;
    write_audit_csv(audit_csv, result);
    const AuditVerdict v = verdict(result, c.tolerance, c.burn_in);

    const fs::path dir = output_dir(o, c);
    write_file(dir, "audit.csv", audit_csv.str());
    write_file(dir, "verdict.json", dump_json(verdict_to_json(v)));
    if (!o.quiet) log_verdict(log, v);
}

void cmd_sample(const CommandOptions& o, std::ostream& log) {
    const ExperimentConfig c = resolve_config(o, false);
    const auto forecaster = resolve_forecaster(o, c);
    const Day horizon = require_horizon(c);
    const Prefix bits = predictive_sample(*forecaster, horizon, require_seed(c, "by sample"));
    write_file(output_dir(o, c), "sample.txt", render_prefix(bits) + "\n");
    if (!o.quiet) log << "days=" << bits.size() << " ones=" << bits.ones() << '\n';
}

}  // namespace forecal
