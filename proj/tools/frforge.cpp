// frforge: front-running attack mining and vulnerability localization
// Copyright 2026 The frforge Authors.
// SPDX-License-Identifier: Apache-2.0

#include "frforge/benchcraft.hpp"
#include "frforge/fixtures.hpp"
#include "frforge/miner.hpp"
#include "frforge/serialize.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace frforge;
using serialize::Json;

namespace
{
using Clock = std::chrono::steady_clock;

// Written next to each output as <out>.manifest.json once the command has finished.
struct RunManifest
{
    std::string command;
    Json config = Json::object();
    Json inputs = Json::object();
    Json outputs = Json::array();
    Json warnings = Json::array();
    Clock::time_point started = Clock::now();

    void input(const fs::path& p, const std::string& content)
    {
        inputs[p.string()] = to_hex(sha256(content));
    }

    void write(const fs::path& out) const
    {
        const auto elapsed = std::chrono::duration<double>(Clock::now() - started).count();
        Json j{{"command", command}, {"config", config}, {"inputs", inputs}, {"outputs", outputs},
            {"warnings", warnings}, {"timing", Json{{"elapsed_secs", elapsed}}}};
        auto p = out;
        p += ".manifest.json";
        serialize::write_file_atomic(p, j.dump(2) + "\n");
    }
};

void write_output(RunManifest& m, const fs::path& out, const std::string& content)
{
    if (out.has_parent_path())
        fs::create_directories(out.parent_path());
    serialize::write_file_atomic(out, content);
    m.outputs.push_back(Json{{"path", out.string()}, {"digest", to_hex(sha256(content))}});
}

chain::History load_history(RunManifest& m, const fs::path& p)
{
    const auto text = serialize::read_file(p);
    m.input(p, text);
    return serialize::history_from_jsonl(text);
}

int cmd_fixtures(const fs::path& dir)
{
    RunManifest m;
    m.command = "fixtures";
    fs::create_directories(dir);
    const std::pair<const char*, chain::History> files[] = {
        {"fixtures.jsonl", fixtures::combined_history()},
        {"relay_guard.jsonl", fixtures::relay_guard_history()},
        {"mini_swap.jsonl", fixtures::mini_swap_history()},
        {"griefing.jsonl", fixtures::griefing_history()},
    };
    for (const auto& [name, h] : files)
        write_output(m, dir / name, serialize::history_to_jsonl(h));
    m.write(dir / "fixtures");
    return 0;
}

int cmd_replay(const fs::path& history_path, const fs::path& out)
{
    RunManifest m;
    m.command = "replay";
    const auto h = load_history(m, history_path);
    std::string text;
    for (std::size_t i = 0; i < h.tx_count(); ++i)
        text += serialize::trace_to_jsonl(h.trace(i));
    write_output(m, out, text);
    m.write(out);
    return 0;
}

struct MineFlags
{
    std::size_t window_blocks = 3;
    std::size_t offset_blocks = 1;
    double timeout_secs = 60;
    int parallelism = 1;
    std::string prune = "order-dependence";
};

int cmd_mine(const fs::path& history_path, const fs::path& out, MineFlags flags)
{
    RunManifest m;
    m.command = "mine";
    if (const char* env = std::getenv("FORGE_PARALLELISM"); env && *env)
    {
        try
        {
            flags.parallelism = std::stoi(env);
        }
        catch (const std::exception&)
        {
            throw std::invalid_argument(std::string("FORGE_PARALLELISM is not an integer: ") + env);
        }
    }
    miner::MinerConfig cfg;
    cfg.window_size_blocks = flags.window_blocks;
    cfg.window_offset_blocks = flags.offset_blocks;
    cfg.per_window_timeout = std::chrono::milliseconds(static_cast<std::int64_t>(flags.timeout_secs * 1000.0));
    cfg.parallelism = flags.parallelism;
    cfg.prune = miner::prune_rule_from_name(flags.prune);
    cfg.validate();
    m.config = Json{{"window_blocks", cfg.window_size_blocks}, {"offset_blocks", cfg.window_offset_blocks},
        {"timeout_secs", flags.timeout_secs}, {"parallelism", cfg.parallelism},
        {"prune", std::string(miner::prune_rule_name(cfg.prune))}};

    const auto h = load_history(m, history_path);
    const auto ds = miner::mine_history(h, cfg);
    for (const auto w : ds.timed_out_windows)
    {
        std::cerr << "warning: window " << w << " timed out; its results may be incomplete\n";
        m.warnings.push_back("window " + std::to_string(w) + " timed out");
    }
    m.config["timed_out_windows"] = ds.timed_out_windows;
    write_output(m, out, serialize::dataset_to_jsonl(ds, serialize::history_digest(h)));
    m.write(out);
    std::cerr << ds.attacks.size() << " attack(s) in " << ds.window_count << " window(s)\n";
    return 0;
}

int cmd_localize(const fs::path& history_path, const fs::path& attacks_path, const fs::path& out)
{
    RunManifest m;
    m.command = "localize";
    const auto h = load_history(m, history_path);
    const auto text = serialize::read_file(attacks_path);
    m.input(attacks_path, text);
    const auto ds = serialize::dataset_from_jsonl(text);
    const auto digest = serialize::history_digest(h);
    if (ds.history != digest)
    {
        std::cerr << "error: " << attacks_path.string() << " was mined from history " << to_hex(ds.history)
                  << ", not " << to_hex(digest) << "\n";
        return 3;
    }
    std::vector<benchcraft::LocalizedAttack> localized;
    for (const auto& a : ds.dataset.attacks)
    {
        if (a.i_p && *a.i_p >= h.tx_count())
            throw FormatError("attack " + a.id() + " indexes past the end of the history");
        localized.push_back(benchcraft::localize(a, h));
    }
    write_output(m, out, serialize::localized_to_jsonl(localized, digest));
    m.write(out);
    return 0;
}

int cmd_bench(const fs::path& localized_path, std::size_t top_n, std::uint64_t seed, const fs::path& out)
{
    RunManifest m;
    m.command = "bench";
    m.config = Json{{"top_n", top_n}, {"seed", seed}};
    const auto text = serialize::read_file(localized_path);
    m.input(localized_path, text);
    const auto lf = serialize::localized_from_jsonl(text);

    std::vector<benchcraft::LocalizedAttack> pool = lf.attacks;
    Json top = Json::array();
    if (top_n > 0)
    {
        auto sel = benchcraft::select_top_and_filter(lf.attacks, top_n);
        for (const auto& a : sel.top)
            top.push_back(a.hex());
        pool = std::move(sel.confined);
    }
    const auto bench = benchcraft::dedupe_and_build(pool);
    write_output(m, out, serialize::benchmark_to_jsonl(bench));
    m.write(out);

    Json curve = Json::array();
    for (const auto& p : benchcraft::saturation_curve(benchcraft::as_localized(bench), seed))
        curve.push_back(Json{{"percent", p.percent}, {"distinct_functions", p.distinct_functions}});
    std::size_t labels = 0;
    for (const auto& e : bench)
        labels += e.labels.size();
    std::cout << Json{{"benchmark", out.string()}, {"localized", lf.attacks.size()}, {"top", top},
                     {"candidates", pool.size()}, {"entries", bench.size()}, {"labels", labels},
                     {"saturation", curve}}
                     .dump(2)
              << "\n";
    return 0;
}

int cmd_eval(const fs::path& bench_path, const fs::path& report_path, const std::string& format)
{
    const auto bench = serialize::benchmark_from_jsonl(serialize::read_file(bench_path));
    Json report_json;
    try
    {
        report_json = Json::parse(serialize::read_file(report_path));
    }
    catch (const nlohmann::json::exception& e)
    {
        throw FormatError(report_path.string() + ": " + e.what());
    }
    const auto report = serialize::report_from_json(report_json);
    const auto r = benchcraft::evaluate_detector(bench, report);
    if (format == "table")
        std::cout << serialize::eval_table(r, report.tool);
    else
    {
        auto j = serialize::to_json(r);
        j["tool"] = report.tool;
        std::cout << j.dump(2) << "\n";
    }
    return 0;
}
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"frforge: mine front-running attacks from a transaction history and localize their causes"};
    app.require_subcommand(1);

    fs::path fixtures_dir = ".";
    auto* fx = app.add_subcommand("fixtures", "Write the hand-built fixture histories");
    fx->add_option("--out-dir", fixtures_dir, "Output directory")->capture_default_str();

    fs::path replay_in, replay_out;
    auto* rp = app.add_subcommand("replay", "Replay a history and dump every execution trace");
    rp->add_option("history", replay_in)->required()->check(CLI::ExistingFile);
    rp->add_option("--out", replay_out)->required();

    fs::path mine_in, mine_out;
    MineFlags mf;
    auto* mn = app.add_subcommand("mine", "Search block windows for front-running attacks");
    mn->add_option("history", mine_in)->required()->check(CLI::ExistingFile);
    mn->add_option("--out", mine_out)->required();
    mn->add_option("--window-blocks", mf.window_blocks)->capture_default_str()->check(CLI::PositiveNumber);
    mn->add_option("--offset-blocks", mf.offset_blocks)->capture_default_str()->check(CLI::PositiveNumber);
    mn->add_option("--timeout-secs", mf.timeout_secs, "Per-window budget")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    mn->add_option("--parallelism", mf.parallelism, "Worker threads; FORGE_PARALLELISM overrides")
        ->capture_default_str();
    mn->add_option("--prune", mf.prune)
        ->capture_default_str()
        ->check(CLI::IsMember({"order-dependence", "conflict-only"}));

    fs::path loc_hist, loc_attacks, loc_out;
    auto* lc = app.add_subcommand("localize", "Classify mined attacks and extract influence traces");
    lc->add_option("history", loc_hist)->required()->check(CLI::ExistingFile);
    lc->add_option("attacks", loc_attacks)->required()->check(CLI::ExistingFile);
    lc->add_option("--out", loc_out)->required();

    fs::path bench_in, bench_out;
    std::size_t top_n = 0;
    std::uint64_t seed = 1;
    auto* bn = app.add_subcommand("bench", "Build a deduplicated, labeled benchmark");
    bn->add_option("localized", bench_in)->required()->check(CLI::ExistingFile);
    bn->add_option("--top-n", top_n, "Keep attacks confined to the N most popular contracts; 0 keeps all")
        ->capture_default_str();
    bn->add_option("--seed", seed, "Shuffle seed for the saturation curve")->capture_default_str();
    bn->add_option("--out", bench_out)->required();

    fs::path eval_bench, eval_report;
    std::string format = "json";
    auto* ev = app.add_subcommand("eval", "Score a detector report against a benchmark");
    ev->add_option("benchmark", eval_bench)->required()->check(CLI::ExistingFile);
    ev->add_option("report", eval_report)->required()->check(CLI::ExistingFile);
    ev->add_option("--format", format)->capture_default_str()->check(CLI::IsMember({"json", "table"}));

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*fx)
            return cmd_fixtures(fixtures_dir);
        if (*rp)
            return cmd_replay(replay_in, replay_out);
        if (*mn)
            return cmd_mine(mine_in, mine_out, mf);
        if (*lc)
            return cmd_localize(loc_hist, loc_attacks, loc_out);
        if (*bn)
            return cmd_bench(bench_in, top_n, seed, bench_out);
        if (*ev)
            return cmd_eval(eval_bench, eval_report, format);
    }
    catch (const FormatError& e)
    {
        std::cerr << "error: malformed input: " << e.what() << "\n";
        return 2;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
