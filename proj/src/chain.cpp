// frforge: front-running attack mining and vulnerability localization
// Copyright 2026 The frforge Authors.
// SPDX-License-Identifier: Apache-2.0

#include "frforge/chain.hpp"

#include <set>

namespace frforge::chain
{
History::History(minivm::WorldState genesis, std::vector<Block> blocks)
  : genesis_{std::move(genesis)}, blocks_{std::move(blocks)}, replay_{std::make_unique<Replay>()}
{
    std::set<Digest> ids;
    for (std::size_t b = 0; b < blocks_.size(); ++b)
    {
        if (b > 0 && blocks_[b].number != blocks_[b - 1].number + 1)
            throw std::invalid_argument("block numbers must increase by one at block " +
                                        std::to_string(blocks_[b].number));
        block_start_.push_back(txs_.size());
        for (const auto& tx : blocks_[b].txs)
        {
            if (!ids.insert(tx.id).second)
                throw std::invalid_argument("duplicate tx id " + to_hex(tx.id) + " in block " +
                                            std::to_string(blocks_[b].number));
            txs_.push_back(&tx);
            block_of_.push_back(b);
        }
    }
    block_start_.push_back(txs_.size());
}

History& History::operator=(const History& other)
{
    if (this != &other)
        *this = History(other);
    return *this;
}

const History::Replay& History::replay() const
{
    std::call_once(replay_->once, [this] {
        auto& r = *replay_;
        r.states.reserve(txs_.size() + 1);
        r.traces.reserve(txs_.size());
        r.states.push_back(genesis_);
        for (const auto* tx : txs_)
        {
            auto [next, trace] = minivm::execute_transaction(r.states.back(), *tx);
            r.states.push_back(std::move(next));
            r.traces.push_back(std::move(trace));
        }
    });
    return *replay_;
}

const minivm::WorldState& History::pre_state(std::size_t i) const
{
    return replay().states.at(i);
}

const minivm::ExecutionTrace& History::trace(std::size_t i) const
{
    return replay().traces.at(i);
}

std::vector<Window> windows(const History& history, std::size_t size_blocks, std::size_t offset_blocks)
{
    if (size_blocks == 0 || offset_blocks == 0)
        throw std::invalid_argument("window size and offset must be positive");
    std::vector<Window> out;
    const auto n = history.blocks().size();
    for (std::size_t k = 0; k * offset_blocks < n; ++k)
    {
        Window w;
        w.id = k;
        w.first_block = k * offset_blocks;
        w.end_block = std::min(w.first_block + size_blocks, n);
        w.begin = history.first_tx_of_block(w.first_block);
        w.end = history.first_tx_of_block(w.end_block);
        w.history = &history;
        out.push_back(w);
        if (w.end_block == n)
            break;
    }
    return out;
}

namespace
{
assets::SideProfits side_profits(
    std::span<const minivm::ExecutionTrace* const> traces, const assets::ActorSet& actors)
{
    return {assets::profits_of(traces, actors.attacker), assets::profits_of(traces, actors.victim)};
}
}  // namespace

AttackScenario attack_scenario_profits(const History& h, const TupleIndex& t, const assets::ActorSet& actors)
{
    AttackScenario s;
    s.traces.push_back(&h.trace(t.a));
    s.traces.push_back(&h.trace(t.v));
    if (t.p)
        s.traces.push_back(&h.trace(*t.p));
    s.profits = side_profits(s.traces, actors);
    return s;
}

std::optional<FreeScenario> attack_free_scenario_profits(
    const History& h, const TupleIndex& t, const assets::ActorSet& actors)
{
    FreeScenario s;
    minivm::WorldState st = h.pre_state(t.a);
    std::vector<std::size_t> order{t.v, t.a};
    if (t.p)
        order.push_back(*t.p);
    for (const auto i : order)
    {
        auto [next, trace] = minivm::execute_transaction(st, h.tx(i));
        if (trace.status == minivm::TxStatus::ProtocolViolation)
            return std::nullopt;
        st = std::move(next);
        s.traces.push_back(std::move(trace));
    }
    std::vector<const minivm::ExecutionTrace*> ptrs;
    for (const auto& tr : s.traces)
        ptrs.push_back(&tr);
    s.profits = side_profits(ptrs, actors);
    return s;
}

}  // namespace frforge::chain
