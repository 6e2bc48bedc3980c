// frforge: front-running attack mining and vulnerability localization
// Copyright 2026 The frforge Authors.
// SPDX-License-Identifier: Apache-2.0

// Acceptance gate: prints one PASS/FAIL line per criterion and exits non-zero if any fails.

#include "frforge/benchcraft.hpp"
#include "frforge/fixtures.hpp"
#include "support/ddg_oracle.hpp"
#include "support/random_world.hpp"
#include "support/synthetic.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

using namespace frforge;

namespace
{
using Clock = std::chrono::steady_clock;

// Collects failed expectations; the first few are printed with the verdict.
struct Check
{
    std::vector<std::string> failures;
    std::string note;

    void expect(bool ok, const std::string& what)
    {
        if (!ok)
            failures.push_back(what);
    }
};

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::set<std::string> ids(const std::vector<miner::AttackTuple>& xs)
{
    std::set<std::string> out;
    for (const auto& a : xs)
        out.insert(a.id());
    return out;
}

bool contains(const std::vector<minivm::Location>& v, const minivm::Location& l)
{
    return std::find(v.begin(), v.end(), l) != v.end();
}

std::vector<std::string> entry_keys(const benchcraft::Benchmark& b)
{
    std::vector<std::string> out;
    for (const auto& e : b)
        out.push_back(e.attack.id() + "@" + to_hex(e.influence_trace.trace.identity));
    return out;
}

void fixture_discovery(Check& c)
{
    const auto h = fixtures::combined_history();
    const auto t0 = Clock::now();
    const auto ds = miner::mine_history(h, miner::MinerConfig{});
    const auto secs = seconds_since(t0);
    c.expect(ids(ds.attacks) == std::set<std::string>{"0.1", "3.4.5"}, "mined set differs from {0.1, 3.4.5}");
    for (const auto& a : ds.attacks)
    {
        c.expect(assets::satisfies_properties(a.evidence.attack, a.evidence.free, a.actors),
            a.id() + " fails the profit properties");
        const auto ev = miner::recompute_evidence(h, a);
        c.expect(ev && *ev == a.evidence, a.id() + " does not re-validate");
    }
    if (ds.attacks.size() == 2)
    {
        c.expect(ds.attacks[0].actors.attacker.count(fixtures::addr::relay_attacker) == 1, "0.1 attacker");
        c.expect(ds.attacks[1].actors.attacker.count(fixtures::addr::swap_attacker) == 1, "3.4.5 attacker");
    }
    c.expect(secs < 1.0, "took " + std::to_string(secs) + " s");
    c.note = std::to_string(ds.attacks.size()) + " attacks, " + std::to_string(secs) + " s";
}

void pruning_soundness(Check& c)
{
    testkit::Rng rng{500};
    const auto t0 = Clock::now();
    std::size_t windows = 0;
    std::size_t attacks = 0;
    std::size_t mismatches = 0;
    const int histories = 500;
    for (int i = 0; i < histories; ++i)
    {
        const auto h = testkit::random_history(rng);
        c.expect(h.tx_count() <= 20, "history too long");
        for (const auto& w : chain::windows(h, 3, 1))
        {
            const auto mined = miner::mine_window(w, miner::MinerConfig{});
            const auto brute = miner::brute_force_mine(w);
            ++windows;
            attacks += brute.size();
            if (ids(mined.attacks) != ids(brute))
            {
                ++mismatches;
                c.expect(false, "history " + std::to_string(i) + " window " + std::to_string(w.id) + " differs");
            }
        }
    }
    const auto secs = seconds_since(t0);
    c.expect(secs < 60.0, "took " + std::to_string(secs) + " s");
    c.expect(attacks > 0, "no attacks generated");
    c.note = std::to_string(histories) + " histories, " + std::to_string(windows) + " windows, " +
             std::to_string(attacks) + " brute-force attacks, " + std::to_string(mismatches) + " mismatches, " +
             std::to_string(secs) + " s";
}

void pattern_classification(Check& c)
{
    const auto first = [](const chain::History& h) {
        const auto ds = miner::mine_history(h, miner::MinerConfig{});
        if (ds.attacks.size() != 1)
            throw std::runtime_error("expected one attack, got " + std::to_string(ds.attacks.size()));
        return benchcraft::localize(ds.attacks[0], h);
    };
    const auto relay = first(fixtures::relay_guard_history());
    c.expect(relay.pattern && relay.pattern->kind == taint::PatternKind::PathConditionAlteration, "relay kind");
    c.expect(relay.pattern && relay.pattern->sink == fixtures::uniqueness_branch(), "relay sink");

    const auto swap = first(fixtures::mini_swap_history());
    c.expect(swap.pattern && swap.pattern->kind == taint::PatternKind::ComputationAlteration, "swap kind");
    c.expect(swap.pattern && swap.pattern->sink == fixtures::token_out_transfer(), "swap sink");

    const auto grief = first(fixtures::griefing_history());
    c.expect(grief.pattern && grief.pattern->kind == taint::PatternKind::GasEstimationGriefing, "griefing kind");
    c.expect(grief.skipped && grief.traces.empty(), "griefing not skipped");
    c.note = "relay, swap and griefing fixtures";
}

void trace_reduction(Check& c)
{
    const auto h = fixtures::mini_swap_history();
    const auto ds = miner::mine_history(h, miner::MinerConfig{});
    if (ds.attacks.size() != 1)
        throw std::runtime_error("swap fixture did not yield one attack");
    const auto& a = ds.attacks[0];
    const auto loc = taint::extract_influence_traces(a, h);
    if (loc.traces.size() != 1)
        throw std::runtime_error("expected one influence trace, got " + std::to_string(loc.traces.size()));
    const auto& it = loc.traces[0];
    const auto& tv = h.trace(a.i_v);
    const double ratio = static_cast<double>(it.steps.size()) / static_cast<double>(tv.steps.size());
    c.expect(it.steps.size() < tv.steps.size(), "trace not shorter than execution");
    c.expect(ratio < 0.5, "ratio " + std::to_string(ratio));
    for (const auto& l : fixtures::swap_fee_locations())
        c.expect(!contains(it.steps, l), "fee step in trace");
    for (const auto& l : fixtures::swap_log_locations())
        c.expect(!contains(it.steps, l), "logging step in trace");
    for (const auto s : it.step_indices)
        c.expect(tv.steps.at(s).instr.op != minivm::Opcode::LOG, "LOG in trace");
    std::ostringstream os;
    os << it.steps.size() << " of " << tv.steps.size() << " steps, ratio " << ratio;
    c.note = os.str();
}

// Returns the number of influence traces checked.
std::size_t slice_check(Check& c, const chain::History& h, const miner::AttackTuple& a)
{
    const auto loc = taint::extract_influence_traces(a, h);
    const auto& tv = h.trace(a.i_v);
    const auto graph = testkit::dependence_graph(tv);
    for (const auto& it : loc.traces)
    {
        const std::set<std::uint32_t> sources(it.source_steps.begin(), it.source_steps.end());
        const auto on_path = testkit::steps_on_paths(graph, sources, it.sink_step);
        for (const auto s : it.step_indices)
            c.expect(on_path.count(s) == 1, "attack " + a.id() + " step " + std::to_string(s) + " off every path");
    }
    return loc.traces.size();
}

void slice_soundness(Check& c)
{
    std::size_t traces = 0;
    std::size_t fixture_attacks = 0;
    for (const auto& h : {fixtures::combined_history(), fixtures::griefing_history()})
    {
        for (const auto& a : miner::mine_history(h, miner::MinerConfig{}).attacks)
        {
            traces += slice_check(c, h, a);
            ++fixture_attacks;
        }
    }
    // Random attacks count only when localization produced at least one trace to check.
    testkit::Rng rng{100};
    std::size_t random_attacks = 0;
    std::size_t failed = 0;
    while (random_attacks < 100)
    {
        for (const auto& [h, a] : testkit::random_attacks(rng, 10))
        {
            if (random_attacks == 100)
                break;
            try
            {
                const auto n = slice_check(c, *h, a);
                traces += n;
                random_attacks += n > 0 ? 1 : 0;
            }
            catch (const std::runtime_error&)
            {
                ++failed;
            }
        }
    }
    c.note = std::to_string(fixture_attacks) + " fixture + " + std::to_string(random_attacks) +
             " random attacks, " + std::to_string(traces) + " traces (" + std::to_string(failed) +
             " random attacks without altered data or divergence skipped)";
}

void vm_conservation(Check& c)
{
    testkit::Rng rng{1000};
    std::size_t reverted = 0;
    for (int i = 0; i < 1000; ++i)
    {
        const auto pc = testkit::random_program_case(rng);
        const auto [st, tr] = minivm::execute_transaction(pc.state, pc.tx);
        const auto tag = "program " + std::to_string(i);
        c.expect(st.total_ether() + tr.fee == pc.state.total_ether(), tag + " ether not conserved");
        const auto again = minivm::execute_transaction(pc.state, pc.tx);
        c.expect(again.first == st && again.second == tr, tag + " not deterministic");
        if (tr.status == minivm::TxStatus::Reverted || tr.status == minivm::TxStatus::OutOfGas)
        {
            ++reverted;
            auto expect = pc.state;
            expect.set_nonce(pc.tx.sender, pc.tx.nonce + 1);
            expect.set_balance(pc.tx.sender, pc.state.balance(pc.tx.sender) - tr.fee);
            c.expect(st == expect && tr.transfers.empty(), tag + " revert not atomic");
        }
    }
    c.note = "1000 programs, " + std::to_string(1000 - reverted) + " succeeded, " + std::to_string(reverted) +
             " reverted or out of gas";
}

void benchmark_semantics(Check& c)
{
    using testkit::fn;
    using testkit::synthetic_attack;
    using testkit::synthetic_trace;
    // Idempotence on random records.
    testkit::Rng rng{7};
    std::uniform_int_distribution<std::uint32_t> pick(0, 4);
    std::uniform_int_distribution<int> n_traces(0, 2);
    for (int round = 0; round < 100; ++round)
    {
        std::vector<benchcraft::LocalizedAttack> xs;
        for (std::size_t i = 0; i < 30; ++i)
        {
            std::vector<benchcraft::LocalizedTrace> ts;
            for (int t = n_traces(rng); t > 0; --t)
                ts.push_back(synthetic_trace({fn(pick(rng), pick(rng))}, pick(rng) % 2));
            xs.push_back(synthetic_attack(3 * i, std::move(ts)));
        }
        const auto once = benchcraft::dedupe_and_build(xs);
        c.expect(entry_keys(benchcraft::dedupe_and_build(benchcraft::as_localized(once))) == entry_keys(once),
            "dedupe not idempotent");
        for (const auto& e : once)
        {
            const auto it = std::find_if(xs.begin(), xs.end(),
                [&](const benchcraft::LocalizedAttack& x) { return x.attack.id() == e.attack.id(); });
            c.expect(it != xs.end() && it->traces.size() == 1, "multi-trace attack kept");
        }
    }
    const auto multi = synthetic_attack(0, {synthetic_trace({fn(1, 1)}), synthetic_trace({fn(1, 2)})});
    c.expect(benchcraft::dedupe_and_build({multi}).empty(), "multi-trace attack kept");

    const auto curve = benchcraft::saturation_curve(testkit::plateau_set(), 1);
    c.expect(curve.size() == 100, "curve length");
    for (std::size_t i = 1; i < curve.size(); ++i)
        c.expect(curve[i - 1].distinct_functions <= curve[i].distinct_functions, "curve not monotone");
    for (std::size_t i = curve.size() - 30; i < curve.size(); ++i)
        c.expect(curve[i].distinct_functions == curve.back().distinct_functions, "no plateau over last 30 points");
    c.note = "plateau at " + std::to_string(curve.back().distinct_functions) + " functions";
}

void evaluation_harness(Check& c)
{
    using testkit::fn;
    std::vector<benchcraft::LocalizedAttack> xs;
    for (std::uint32_t k = 0; k < 4; ++k)
        xs.push_back(testkit::synthetic_attack(2 * k, {testkit::synthetic_trace({fn(k, 1)})}));
    const auto b = benchcraft::dedupe_and_build(xs);
    auto report = [](std::vector<taint::FunctionRef> fns) {
        benchcraft::DetectorReport r{"t", {}};
        for (const auto& f : fns)
            r.flagged.emplace(f.contract, f.selector);
        return r;
    };
    c.expect(benchcraft::evaluate_detector(b, report({fn(0, 1), fn(1, 1), fn(2, 1), fn(3, 1)})).recall == 1.0,
        "full report recall");
    c.expect(benchcraft::evaluate_detector(b, report({})).recall == 0.0, "empty report recall");
    c.expect(benchcraft::evaluate_detector(b, report({fn(3, 1)})).recall == 0.25, "quarter recall");

    testkit::Rng rng{8};
    std::bernoulli_distribution coin(0.5);
    std::uniform_int_distribution<std::uint32_t> pick(0, 5);
    std::vector<benchcraft::LocalizedAttack> ys;
    for (std::uint32_t i = 0; i < 20; ++i)
        ys.push_back(testkit::synthetic_attack(
            2 * i, {testkit::synthetic_trace({fn(pick(rng), pick(rng)), fn(pick(rng), pick(rng))}, i)}));
    const auto big_bench = benchcraft::dedupe_and_build(ys);
    for (int round = 0; round < 200; ++round)
    {
        benchcraft::DetectorReport small{"s", {}};
        benchcraft::DetectorReport big{"b", {}};
        for (std::uint32_t k = 0; k < 36; ++k)
        {
            const auto f = fn(k / 6, k % 6);
            const bool in_small = coin(rng);
            if (in_small)
                small.flagged.emplace(f.contract, f.selector);
            if (in_small || coin(rng))
                big.flagged.emplace(f.contract, f.selector);
        }
        c.expect(benchcraft::evaluate_detector(big_bench, small).recall <=
                     benchcraft::evaluate_detector(big_bench, big).recall,
            "recall not monotone in round " + std::to_string(round));
    }
    c.note = "1.0 / 0.0 / 0.25 cases and 200 report pairs";
}

void window_math(Check& c)
{
    minivm::WorldState g;
    const auto u = Address::from_u64(0xe001);
    g.set_balance(u, 1'000'000);
    std::vector<chain::Block> blocks;
    for (std::uint64_t b = 0; b < 5; ++b)
    {
        std::vector<minivm::TransactionMsg> txs;
        for (std::uint64_t k = 0; k < 2; ++k)
        {
            minivm::TransactionMsg tx;
            tx.sender = u;
            tx.nonce = 2 * b + k;
            tx.target = Address::from_u64(0xe002);
            tx.gas_limit = 21;
            tx.gas_price = 1;
            txs.push_back(tx.seal());
        }
        blocks.push_back({b, txs});
    }
    const chain::History h{g, blocks};
    const auto ws = chain::windows(h, 3, 1);
    std::vector<std::pair<std::size_t, std::size_t>> ranges;
    for (const auto& w : ws)
        ranges.emplace_back(w.first_block, w.end_block - 1);
    c.expect(ranges == std::vector<std::pair<std::size_t, std::size_t>>{{0, 2}, {1, 3}, {2, 4}}, "block ranges");
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < h.tx_count(); ++i)
    {
        for (std::size_t j = i + 1; j < h.tx_count(); ++j)
        {
            if (h.block_of(j) - h.block_of(i) >= 3)
                continue;
            ++pairs;
            const bool together = std::any_of(
                ws.begin(), ws.end(), [&](const chain::Window& w) { return w.begin <= i && j < w.end; });
            c.expect(together, "pair " + std::to_string(i) + "," + std::to_string(j) + " never together");
        }
    }
    c.note = std::to_string(ws.size()) + " windows, " + std::to_string(pairs) + " pairs";
}
}  // namespace

int main()
{
    const std::pair<const char*, std::function<void(Check&)>> criteria[] = {
        {"fixture attack discovery", fixture_discovery},
        {"pruning soundness against brute force", pruning_soundness},
        {"pattern classification", pattern_classification},
        {"influence trace reduction", trace_reduction},
        {"slice soundness against the dependence oracle", slice_soundness},
        {"vm conservation, determinism and atomicity", vm_conservation},
        {"benchmark semantics", benchmark_semantics},
        {"evaluation harness", evaluation_harness},
        {"window math", window_math},
    };
    int failed = 0;
    int n = 0;
    for (const auto& [name, fn] : criteria)
    {
        ++n;
        Check c;
        const auto t0 = Clock::now();
        try
        {
            fn(c);
        }
        catch (const std::exception& e)
        {
            c.failures.push_back(std::string("exception: ") + e.what());
        }
        const bool ok = c.failures.empty();
        failed += ok ? 0 : 1;
        std::cout << (ok ? "PASS" : "FAIL") << " criterion " << n << ": " << name;
        if (!c.note.empty())
            std::cout << " [" << c.note << "]";
        std::cout << " (" << std::chrono::duration<double>(Clock::now() - t0).count() << " s)\n";
        for (std::size_t i = 0; i < c.failures.size() && i < 5; ++i)
            std::cout << "    " << c.failures[i] << "\n";
        if (c.failures.size() > 5)
            std::cout << "    ... " << c.failures.size() - 5 << " more\n";
    }
    std::cout << (n - failed) << "/" << n << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
