// frforge: front-running attack mining and vulnerability localization
// Copyright 2026 The frforge Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "frforge/assets.hpp"
#include "frforge/minivm.hpp"

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

namespace frforge::chain
{
struct Block
{
    std::uint64_t number = 0;
    std::vector<minivm::TransactionMsg> txs;

    friend bool operator==(const Block&, const Block&) = default;
};

/// Genesis plus blocks. Immutable after construction; historical states and traces are
/// replayed lazily on first access and shared by all readers.
class History
{
public:
    History() : History(minivm::WorldState{}, {}) {}
    /// Throws std::invalid_argument when block numbers are not consecutive from the first
    /// block or a tx id appears twice.
    History(minivm::WorldState genesis, std::vector<Block> blocks);

    History(const History& other) : History(other.genesis_, other.blocks_) {}
    History& operator=(const History& other);
    History(History&&) noexcept = default;
    History& operator=(History&&) noexcept = default;

    [[nodiscard]] const minivm::WorldState& genesis() const noexcept { return genesis_; }
    [[nodiscard]] const std::vector<Block>& blocks() const noexcept { return blocks_; }
    [[nodiscard]] std::size_t tx_count() const noexcept { return txs_.size(); }
    [[nodiscard]] const minivm::TransactionMsg& tx(std::size_t i) const { return *txs_.at(i); }
    [[nodiscard]] std::size_t block_of(std::size_t i) const { return block_of_.at(i); }
    /// Global index of the first tx of block b; b may equal blocks().size().
    [[nodiscard]] std::size_t first_tx_of_block(std::size_t b) const { return block_start_.at(b); }

    /// State before tx i; i == tx_count() gives the final state.
    [[nodiscard]] const minivm::WorldState& pre_state(std::size_t i) const;
    [[nodiscard]] const minivm::ExecutionTrace& trace(std::size_t i) const;

private:
    struct Replay
    {
        std::once_flag once;
        std::vector<minivm::WorldState> states;
        std::vector<minivm::ExecutionTrace> traces;
    };

    const Replay& replay() const;

    minivm::WorldState genesis_;
    std::vector<Block> blocks_;
    std::vector<const minivm::TransactionMsg*> txs_;
    std::vector<std::size_t> block_of_;
    std::vector<std::size_t> block_start_;
    std::unique_ptr<Replay> replay_;
};

struct Window
{
    std::size_t id = 0;
    std::size_t first_block = 0;
    std::size_t end_block = 0;  // exclusive
    std::size_t begin = 0;      // global tx index
    std::size_t end = 0;        // exclusive
    const History* history = nullptr;

    [[nodiscard]] std::size_t size() const noexcept { return end - begin; }
    [[nodiscard]] bool empty() const noexcept { return begin == end; }
    [[nodiscard]] const minivm::TransactionMsg& tx(std::size_t global) const { return history->tx(global); }
    [[nodiscard]] const minivm::WorldState& pre_state(std::size_t global) const
    {
        return history->pre_state(global);
    }
};

/// Window k spans blocks [k*offset, k*offset + size), clipped at the end of the history.
/// Emission stops after the first window reaching the last block.
std::vector<Window> windows(const History& history, std::size_t size_blocks, std::size_t offset_blocks);

struct TupleIndex
{
    std::size_t a = 0;
    std::size_t v = 0;
    std::optional<std::size_t> p;

    friend auto operator<=>(const TupleIndex&, const TupleIndex&) = default;
};

struct AttackScenario
{
    assets::SideProfits profits;
    std::vector<const minivm::ExecutionTrace*> traces;  // T_a, T_v, T_ap as executed in history
};

struct FreeScenario
{
    assets::SideProfits profits;
    std::vector<minivm::ExecutionTrace> traces;  // T_v, T_a, T_ap
};

AttackScenario attack_scenario_profits(const History& h, const TupleIndex& t, const assets::ActorSet& actors);

/// Runs T_v, T_a, then T_ap from the state before T_a. nullopt (infeasible) when any of
/// them violates the protocol.
std::optional<FreeScenario> attack_free_scenario_profits(
    const History& h, const TupleIndex& t, const assets::ActorSet& actors);

}  // namespace frforge::chain
