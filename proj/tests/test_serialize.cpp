// frforge: front-running attack mining and vulnerability localization
// Copyright 2026 The frforge Authors.
// SPDX-License-Identifier: Apache-2.0

#include "frforge/fixtures.hpp"
#include "frforge/serialize.hpp"
#include "support/random_world.hpp"
#include "support/synthetic.hpp"

#include <doctest.h>

#include <filesystem>

using namespace frforge;
using namespace frforge::serialize;

namespace
{
std::string dump_all(const std::vector<benchcraft::LocalizedAttack>& xs)
{
    std::string out;
    for (const auto& a : xs)
        out += to_json(a).dump() + "\n";
    return out;
}
}  // namespace

TEST_SUITE("serialize")
{
    TEST_CASE("small values round trip")
    {
        const auto tok = AssetKey::token(TokenStandard::ERC1155, Address::from_u64(0xd000), Word{3});
        CHECK(asset_from_json(to_json(tok)) == tok);
        CHECK(asset_from_json(to_json(AssetKey::ether())) == AssetKey::ether());
        const auto k = minivm::SharedKey::storage(Address::from_u64(1), Word{9});
        CHECK(key_from_json(to_json(k)) == k);
        const auto b = minivm::SharedKey::balance(Address::from_u64(2));
        CHECK(key_from_json(to_json(b)) == b);
        const minivm::Location l{Address::from_u64(3), 17};
        CHECK(location_from_json(to_json(l)) == l);
        const auto c = fixtures::pair();
        CHECK(contract_from_json(to_json(c)) == c);
        CHECK(to_json(taint::AttackPattern{}).at("kind") == "ComputationAlteration");
    }

    TEST_CASE("contracts may be written as assembly text with labelled entries")
    {
        const auto j = Json::parse(R"j({
            "address": "0x000000000000000000000000000000000000c000",
            "functions": [{"name": "go()", "entry": "go", "visibility": "public"}],
            "code": "PUSH 1\ngo:\nSTOP"
        })j");
        const auto c = contract_from_json(j);
        CHECK(c.code.size() == 2);
        CHECK(c.functions.at(selector_of("go()")).entry == 1);
    }

    TEST_CASE("transactions are checked against their id")
    {
        const auto tx = fixtures::relay_guard_history().tx(0);
        auto j = to_json(tx);
        CHECK(tx_from_json(j) == tx);
        j["gas_price"] = 999;
        CHECK_THROWS_AS(tx_from_json(j), FormatError);
        j.erase("id");
        CHECK(tx_from_json(j).gas_price == 999);
    }

    TEST_CASE("property: random histories round trip and keep their digest")
    {
        testkit::Rng rng{4};
        for (int i = 0; i < 30; ++i)
        {
            const auto h = testkit::random_history(rng);
            const auto text = history_to_jsonl(h);
            const auto back = history_from_jsonl(text);
            CHECK(history_to_jsonl(back) == text);
            CHECK(history_digest(back) == history_digest(h));
            CHECK(back.pre_state(back.tx_count()) == h.pre_state(h.tx_count()));
        }
        CHECK(history_digest(fixtures::relay_guard_history()) != history_digest(fixtures::mini_swap_history()));
    }

    TEST_CASE("datasets round trip with their summary")
    {
        const auto h = fixtures::combined_history();
        const auto ds = miner::mine_history(h, miner::MinerConfig{});
        const auto text = dataset_to_jsonl(ds, history_digest(h));
        const auto back = dataset_from_jsonl(text);
        CHECK(back.history == history_digest(h));
        CHECK(back.dataset.window_count == ds.window_count);
        REQUIRE(back.dataset.attacks.size() == ds.attacks.size());
        CHECK(dataset_to_jsonl(back.dataset, back.history) == text);
        for (std::size_t i = 0; i < ds.attacks.size(); ++i)
            CHECK(back.dataset.attacks[i].evidence == ds.attacks[i].evidence);
    }

    TEST_CASE("localized records and benchmarks round trip")
    {
        const auto h = fixtures::combined_history();
        std::vector<benchcraft::LocalizedAttack> xs;
        for (const auto& a : miner::mine_history(h, miner::MinerConfig{}).attacks)
            xs.push_back(benchcraft::localize(a, h));
        auto failed = testkit::synthetic_attack(40, {});
        failed.pattern.reset();
        failed.error = "no_divergence";
        xs.push_back(failed);

        const auto text = localized_to_jsonl(xs, history_digest(h));
        const auto back = localized_from_jsonl(text);
        CHECK(back.history == history_digest(h));
        CHECK(dump_all(back.attacks) == dump_all(xs));
        CHECK(back.attacks.back().error == "no_divergence");
        for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        {
            REQUIRE(back.attacks[i].traces.size() == xs[i].traces.size());
            for (std::size_t t = 0; t < xs[i].traces.size(); ++t)
                CHECK(back.attacks[i].traces[t] == xs[i].traces[t]);
        }

        const auto bench = benchcraft::dedupe_and_build(xs);
        const auto btext = benchmark_to_jsonl(bench);
        CHECK(benchmark_to_jsonl(benchmark_from_jsonl(btext)) == btext);
        CHECK(benchmark_from_jsonl("").empty());
    }

    TEST_CASE("influence traces with a forged identity are rejected")
    {
        auto j = to_json(testkit::synthetic_trace({testkit::fn(0, 1), testkit::fn(0, 2)}).trace);
        CHECK_NOTHROW(influence_trace_from_json(j));
        j["identity"] = to_hex(sha256(std::string_view{"nope"}));
        CHECK_THROWS_AS(influence_trace_from_json(j), FormatError);
    }

    TEST_CASE("reports and evaluation output")
    {
        const auto r = report_from_json(Json::parse(
            R"({"tool": "t", "flagged": [{"contract": "0x000000000000000000000000000000000000c001", "selector": "0x00000002"}]})"));
        CHECK(r.tool == "t");
        CHECK(r.flagged.count({Address::from_u64(0xc001), 2}));
        CHECK(report_from_json(to_json(r)).flagged == r.flagged);

        benchcraft::EvalResult e;
        e.tp = 1;
        e.fn = 3;
        e.recall = 0.25;
        e.per_attack = {{"0.1", true}, {"2.3", false}};
        const auto j = to_json(e);
        CHECK(j.at("recall") == 0.25);
        CHECK(j.at("per_attack").at("2.3") == "FN");
        const auto table = eval_table(e, "t");
        CHECK(table.find("0.25") != std::string::npos);
        CHECK(table.find("2.3") != std::string::npos);
    }

    TEST_CASE("malformed input raises format errors with line numbers")
    {
        CHECK_THROWS_AS(history_from_jsonl("{not json"), FormatError);
        CHECK_THROWS_AS(history_from_jsonl(R"({"blocks": []})"), FormatError);
        CHECK_THROWS_AS(report_from_json(Json::parse(R"({"flagged": 3})")), FormatError);
        CHECK_THROWS_AS(dataset_from_jsonl(R"({"record": "summary"})"), FormatError);
        const auto h = fixtures::relay_guard_history();
        auto text = history_to_jsonl(h);
        text += "{\"number\": 7, \"txs\": [}\n";
        try
        {
            (void)history_from_jsonl(text);
            FAIL("no error");
        }
        catch (const FormatError& e)
        {
            CHECK(std::string{e.what()}.find("line 3") != std::string::npos);
        }
    }

    TEST_CASE("atomic writes replace the file and leave no temporary behind")
    {
        const auto dir = std::filesystem::temp_directory_path() / "frforge_serialize_test";
        std::filesystem::create_directories(dir);
        const auto p = dir / "out.json";
        write_file_atomic(p, "one");
        write_file_atomic(p, "two");
        CHECK(read_file(p) == "two");
        CHECK_FALSE(std::filesystem::exists(dir / "out.json.tmp"));
        CHECK_THROWS(read_file(dir / "missing.json"));
        std::filesystem::remove_all(dir);
    }
}
