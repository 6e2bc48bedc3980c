// frforge: front-running attack mining and vulnerability localization
// Copyright 2026 The frforge Authors.
// SPDX-License-Identifier: Apache-2.0

#include "frforge/chain.hpp"
#include "frforge/fixtures.hpp"
#include "support/random_world.hpp"

#include <doctest.h>

#include <thread>

using namespace frforge;
using namespace frforge::chain;

namespace
{
const Address kUser = Address::from_u64(0xe001);

minivm::TransactionMsg pay(std::uint64_t nonce, std::uint64_t amount = 1)
{
    minivm::TransactionMsg tx;
    tx.sender = kUser;
    tx.nonce = nonce;
    tx.target = Address::from_u64(0xe002);
    tx.value = amount;
    tx.gas_limit = 21;
    tx.gas_price = 1;
    return tx.seal();
}

// One payment per block, `n` blocks.
History payments(std::size_t n)
{
    minivm::WorldState g;
    g.set_balance(kUser, 1'000'000);
    std::vector<Block> blocks;
    for (std::size_t b = 0; b < n; ++b)
        blocks.push_back(Block{b, {pay(b)}});
    return History{g, blocks};
}

std::vector<std::pair<std::size_t, std::size_t>> ranges(const std::vector<Window>& ws)
{
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (const auto& w : ws)
        out.emplace_back(w.first_block, w.end_block - 1);
    return out;
}

using Ranges = std::vector<std::pair<std::size_t, std::size_t>>;
}  // namespace

TEST_SUITE("chain")
{
    TEST_CASE("history construction checks block numbers and tx ids")
    {
        minivm::WorldState g;
        g.set_balance(kUser, 100);
        CHECK_NOTHROW(History(g, {Block{7, {pay(0)}}, Block{8, {pay(1)}}}));
        CHECK_THROWS_AS(History(g, {Block{7, {pay(0)}}, Block{9, {pay(1)}}}), std::invalid_argument);
        CHECK_THROWS_AS(History(g, {Block{0, {pay(0), pay(0)}}}), std::invalid_argument);
        CHECK_THROWS_AS(History(g, {Block{0, {pay(0)}}, Block{1, {pay(0)}}}), std::invalid_argument);
    }

    TEST_CASE("replay matches sequential block application")
    {
        testkit::Rng rng{11};
        for (int i = 0; i < 20; ++i)
        {
            const auto h = testkit::random_history(rng);
            auto st = h.genesis();
            std::size_t k = 0;
            for (const auto& b : h.blocks())
            {
                CHECK(h.first_tx_of_block(&b - h.blocks().data()) == k);
                auto [next, traces] = minivm::apply_block(st, b.txs);
                for (const auto& t : traces)
                {
                    CHECK(h.pre_state(k) == st);
                    CHECK(h.trace(k) == t);
                    CHECK(h.block_of(k) == static_cast<std::size_t>(&b - h.blocks().data()));
                    st = minivm::execute_transaction(st, h.tx(k)).first;
                    ++k;
                }
                CHECK(st == next);
            }
            CHECK(h.pre_state(h.tx_count()) == st);
            CHECK(h.first_tx_of_block(h.blocks().size()) == h.tx_count());
        }
    }

    TEST_CASE("replay is shared safely between threads")
    {
        const auto h = fixtures::combined_history();
        std::vector<const minivm::ExecutionTrace*> seen(8);
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < seen.size(); ++i)
            pool.emplace_back([&, i] { seen[i] = &h.trace(0); });
        for (auto& t : pool)
            t.join();
        for (const auto* p : seen)
            CHECK(p == seen[0]);
        // Copies replay on their own.
        const History copy = h;
        CHECK(&copy.trace(0) != seen[0]);
        CHECK(copy.trace(0) == *seen[0]);
    }

    TEST_CASE("windows over five blocks with size three and offset one")
    {
        const auto h = payments(5);
        const auto ws = windows(h, 3, 1);
        CHECK(ranges(ws) == Ranges{{0, 2}, {1, 3}, {2, 4}});
        CHECK(ws[1].begin == 1);
        CHECK(ws[1].end == 4);
        CHECK(ws[2].id == 2);
    }

    TEST_CASE("window edge cases")
    {
        CHECK(windows(History{}, 3, 1).empty());
        CHECK(ranges(windows(payments(2), 3, 1)) == Ranges{{0, 1}});
        CHECK(ranges(windows(payments(3), 3, 1)) == Ranges{{0, 2}});
        CHECK(ranges(windows(payments(10), 3, 2)) == Ranges{{0, 2}, {2, 4}, {4, 6}, {6, 8}, {8, 9}});
        CHECK(ranges(windows(payments(5), 1, 2)) == Ranges{{0, 0}, {2, 2}, {4, 4}});
        CHECK_THROWS_AS(windows(payments(3), 0, 1), std::invalid_argument);
        CHECK_THROWS_AS(windows(payments(3), 3, 0), std::invalid_argument);
    }

    TEST_CASE("property: every pair of transactions within `size` blocks shares a window")
    {
        for (std::size_t n = 1; n <= 12; ++n)
        {
            const auto h = payments(n);
            for (std::size_t size = 1; size <= 4; ++size)
            {
                for (std::size_t offset = 1; offset <= size; ++offset)
                {
                    const auto ws = windows(h, size, offset);
                    CHECK(ws.back().end_block == n);
                    for (std::size_t i = 0; i < n; ++i)
                    {
                        for (std::size_t j = i; j < n && j < i + size - offset + 1; ++j)
                        {
                            bool together = false;
                            for (const auto& w : ws)
                                together = together || (w.begin <= i && j < w.end);
                            INFO("n=" << n << " size=" << size << " offset=" << offset << " pair " << i << "," << j);
                            CHECK(together);
                        }
                    }
                }
            }
        }
    }

    TEST_CASE("attack and attack-free scenarios for the relay fixture")
    {
        const auto h = fixtures::relay_guard_history();
        const auto actors = assets::actor_set(h.trace(0), h.trace(1));
        const TupleIndex t{0, 1, std::nullopt};
        const auto attack = attack_scenario_profits(h, t, actors);
        const auto free = attack_free_scenario_profits(h, t, actors);
        REQUIRE(free);
        CHECK(attack.traces.size() == 2);
        CHECK(free->traces.size() == 2);
        CHECK(free->traces[0].status == minivm::TxStatus::Success);
        CHECK(free->traces[1].status == minivm::TxStatus::Reverted);
        CHECK(assets::satisfies_properties(attack.profits, free->profits, actors));
    }

    TEST_CASE("attack-free scenario is infeasible when reordering breaks nonces")
    {
        const auto h = payments(2);
        // Same sender: running T_v first is a nonce violation.
        CHECK_FALSE(attack_free_scenario_profits(h, TupleIndex{0, 1, std::nullopt}, {}));
    }
}
