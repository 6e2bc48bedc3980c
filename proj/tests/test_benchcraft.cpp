// frforge: front-running attack mining and vulnerability localization
// Copyright 2026 The frforge Authors.
// SPDX-License-Identifier: Apache-2.0

#include "frforge/benchcraft.hpp"
#include "frforge/fixtures.hpp"
#include "support/random_world.hpp"
#include "support/synthetic.hpp"

#include <doctest.h>

#include <algorithm>

using namespace frforge;
using namespace frforge::benchcraft;
using testkit::fn;
using testkit::synthetic_attack;
using testkit::synthetic_trace;

namespace
{
std::vector<std::string> entry_ids(const Benchmark& b)
{
    std::vector<std::string> out;
    for (const auto& e : b)
        out.push_back(e.attack.id() + "@" + to_hex(e.influence_trace.trace.identity));
    return out;
}

// Four single-function attacks; the report decides which ones count.
Benchmark four_entries()
{
    std::vector<LocalizedAttack> xs;
    for (std::uint32_t k = 0; k < 4; ++k)
        xs.push_back(synthetic_attack(2 * k, {synthetic_trace({fn(k, 1)})}));
    return dedupe_and_build(xs);
}

DetectorReport flagging(std::initializer_list<taint::FunctionRef> fns)
{
    DetectorReport r{"test", {}};
    for (const auto& f : fns)
        r.flagged.emplace(f.contract, f.selector);
    return r;
}
}  // namespace

TEST_SUITE("benchcraft")
{
    TEST_CASE("localize records patterns, skips and functions for the fixtures")
    {
        const auto h = fixtures::combined_history();
        const auto ds = miner::mine_history(h, miner::MinerConfig{});
        REQUIRE(ds.attacks.size() == 2);
        const auto relay = localize(ds.attacks[0], h);
        CHECK(relay.error.empty());
        REQUIRE(relay.traces.size() == 1);
        CHECK(relay.traces[0].functions.begin()->name == "relayOperation");

        const auto swap = localize(ds.attacks[1], h);
        REQUIRE(swap.traces.size() == 1);
        std::set<std::string> names;
        for (const auto& f : swap.traces[0].functions)
            names.insert(f.name);
        CHECK(names.count("swap"));
        CHECK(names.count("doSwap"));

        const auto g = fixtures::griefing_history();
        const auto grief = localize(miner::mine_history(g, miner::MinerConfig{}).attacks.at(0), g);
        CHECK(grief.skipped);
        CHECK(grief.traces.empty());
        CHECK(dedupe_and_build({relay, swap, grief}).size() == 2);
    }

    TEST_CASE("localize reports failures instead of throwing")
    {
        const auto h = fixtures::combined_history();
        // Counter bump then the swap victim: nothing the first writes is read by the second.
        miner::AttackTuple bogus;
        bogus.i_a = 2;
        bogus.i_v = 4;
        bogus.t_a = h.tx(2).id;
        bogus.t_v = h.tx(4).id;
        const auto r = localize(bogus, h);
        CHECK(r.error == "no_altered_data");
        CHECK(r.traces.empty());
        std::swap(bogus.i_a, bogus.i_v);
        CHECK(localize(bogus, h).error == "infeasible");
    }

    TEST_CASE("popularity counts each attack once per contract")
    {
        const auto a = synthetic_attack(0, {synthetic_trace({fn(0, 1), fn(0, 2), fn(1, 1)})});
        const auto b = synthetic_attack(2, {synthetic_trace({fn(1, 1)})});
        const auto pop = contract_popularity({a, b});
        CHECK(pop.at(fn(0, 0).contract) == 1);
        CHECK(pop.at(fn(1, 0).contract) == 2);
    }

    TEST_CASE("top contracts break ties by address and keep only confined single-trace attacks")
    {
        const auto a = synthetic_attack(0, {synthetic_trace({fn(2, 1)})});
        const auto b = synthetic_attack(2, {synthetic_trace({fn(1, 1)})});
        const auto c = synthetic_attack(4, {synthetic_trace({fn(1, 1), fn(3, 1)})});
        const auto d = synthetic_attack(6, {synthetic_trace({fn(2, 1)}), synthetic_trace({fn(2, 2)})});
        const auto sel = select_top_and_filter({a, b, c, d}, 2);
        // Contract 1 and 2 have two attacks each; 3 has one.
        CHECK(sel.top == std::vector<Address>{fn(1, 0).contract, fn(2, 0).contract});
        REQUIRE(sel.confined.size() == 2);
        CHECK(sel.confined[0].attack.i_a == 0);
        CHECK(sel.confined[1].attack.i_a == 2);
        CHECK(select_top_and_filter({a, b, c, d}, 10).confined.size() == 3);
        CHECK_THROWS_AS(select_top_and_filter({a}, 0), std::invalid_argument);
    }

    TEST_CASE("dedupe keeps the earliest attack per identity and drops multi-trace attacks")
    {
        const auto late = synthetic_attack(8, {synthetic_trace({fn(0, 1)})});
        const auto early = synthetic_attack(2, {synthetic_trace({fn(0, 1)})});
        const auto multi = synthetic_attack(0, {synthetic_trace({fn(1, 1)}), synthetic_trace({fn(1, 2)})});
        auto no_fn = synthetic_attack(4, {synthetic_trace({fn(2, 1)})});
        no_fn.traces[0].functions.clear();
        auto failed = synthetic_attack(6, {});
        failed.error = "no_divergence";
        failed.pattern.reset();

        const auto b = dedupe_and_build({late, multi, early, no_fn, failed});
        REQUIRE(b.size() == 1);
        CHECK(b[0].attack.i_a == 2);
        REQUIRE(b[0].labels.size() == 1);
        CHECK(b[0].labels.begin()->attack_id == "2.3");
        CHECK(b[0].labels.begin()->name == "f1");
        CHECK(dedupe_and_build({early, late}).size() == 1);
        CHECK(dedupe_and_build({multi}).empty());
    }

    TEST_CASE("property: dedupe is idempotent and order independent")
    {
        testkit::Rng rng{13};
        std::uniform_int_distribution<int> n_traces(0, 2);
        std::uniform_int_distribution<std::uint32_t> pick(0, 4);
        for (int round = 0; round < 200; ++round)
        {
            std::vector<LocalizedAttack> xs;
            for (std::size_t i = 0; i < 30; ++i)
            {
                std::vector<LocalizedTrace> ts;
                for (int t = n_traces(rng); t > 0; --t)
                    ts.push_back(synthetic_trace({fn(pick(rng), pick(rng))}, pick(rng) % 2));
                xs.push_back(synthetic_attack(3 * i, std::move(ts)));
            }
            const auto once = dedupe_and_build(xs);
            CHECK(entry_ids(dedupe_and_build(as_localized(once))) == entry_ids(once));
            std::shuffle(xs.begin(), xs.end(), rng);
            CHECK(entry_ids(dedupe_and_build(xs)) == entry_ids(once));
            std::set<Digest> seen;
            for (const auto& e : once)
                CHECK(seen.insert(e.influence_trace.trace.identity).second);
        }
    }

    TEST_CASE("saturation curve")
    {
        const auto xs = testkit::plateau_set();
        const auto curve = saturation_curve(xs, 1);
        REQUIRE(curve.size() == 100);
        CHECK(curve.front().percent == 1);
        CHECK(curve.back().percent == 100);
        CHECK(curve.back().distinct_functions == 3);
        for (std::size_t i = 1; i < curve.size(); ++i)
            CHECK(curve[i - 1].distinct_functions <= curve[i].distinct_functions);
        for (std::size_t i = 70; i < curve.size(); ++i)
            CHECK(curve[i].distinct_functions == curve.back().distinct_functions);
        CHECK(saturation_curve(xs, 1) == curve);
        CHECK(saturation_curve({}, 1).back().distinct_functions == 0);
    }

    TEST_CASE("property: saturation curves are monotone for any seed")
    {
        testkit::Rng rng{21};
        std::uniform_int_distribution<std::uint32_t> pick(0, 9);
        for (std::uint64_t seed = 0; seed < 50; ++seed)
        {
            std::vector<LocalizedAttack> xs;
            for (std::size_t i = 0; i < 1 + seed; ++i)
                xs.push_back(synthetic_attack(2 * i, {synthetic_trace({fn(pick(rng), pick(rng))})}));
            const auto curve = saturation_curve(xs, seed);
            for (std::size_t i = 1; i < curve.size(); ++i)
                CHECK(curve[i - 1].distinct_functions <= curve[i].distinct_functions);
        }
    }

    TEST_CASE("recall on hand-built reports")
    {
        const auto b = four_entries();
        REQUIRE(b.size() == 4);
        CHECK(evaluate_detector(b, flagging({fn(0, 1), fn(1, 1), fn(2, 1), fn(3, 1)})).recall == 1.0);
        CHECK(evaluate_detector(b, flagging({})).recall == 0.0);
        CHECK(evaluate_detector(b, flagging({fn(9, 9)})).recall == 0.0);
        const auto quarter = evaluate_detector(b, flagging({fn(2, 1), fn(2, 2)}));
        CHECK(quarter.recall == 0.25);
        CHECK(quarter.tp == 1);
        CHECK(quarter.fn == 3);
        CHECK(quarter.per_attack.at("4.5"));
        CHECK_FALSE(quarter.per_attack.at("0.1"));
        CHECK(evaluate_detector({}, flagging({fn(0, 1)})).recall == 0.0);
    }

    TEST_CASE("property: recall is monotone in the flagged set")
    {
        testkit::Rng rng{77};
        std::uniform_int_distribution<std::uint32_t> pick(0, 5);
        std::bernoulli_distribution coin(0.5);
        std::vector<LocalizedAttack> xs;
        for (std::size_t i = 0; i < 20; ++i)
            xs.push_back(synthetic_attack(2 * i, {synthetic_trace({fn(pick(rng), pick(rng)), fn(pick(rng), pick(rng))}, i)}));
        const auto b = dedupe_and_build(xs);
        for (int round = 0; round < 200; ++round)
        {
            DetectorReport small{"small", {}};
            DetectorReport big{"big", {}};
            for (std::uint32_t c = 0; c <= 5; ++c)
            {
                for (std::uint32_t k = 0; k <= 5; ++k)
                {
                    const auto f = fn(c, k);
                    const bool in_small = coin(rng);
                    if (in_small)
                        small.flagged.emplace(f.contract, f.selector);
                    if (in_small || coin(rng))
                        big.flagged.emplace(f.contract, f.selector);
                }
            }
            CHECK(evaluate_detector(b, small).recall <= evaluate_detector(b, big).recall);
        }
    }
}
