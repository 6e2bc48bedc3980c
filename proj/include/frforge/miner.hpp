// frforge: front-running attack mining and vulnerability localization
// Copyright 2026 The frforge Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "frforge/assets.hpp"
#include "frforge/chain.hpp"

#include <chrono>
#include <optional>
#include <string>
#include <vector>

namespace frforge::miner
{
enum class PruneRule : std::uint8_t
{
    /// Skip a tuple only when reordering provably cannot change any of its traces.
    OrderDependence,
    /// Skip a pair unless T_a's writes meet T_v's def-clear reads.
    ConflictOnly,
};

std::string_view prune_rule_name(PruneRule r) noexcept;
PruneRule prune_rule_from_name(std::string_view name);

struct MinerConfig
{
    std::size_t window_size_blocks = 3;
    std::size_t window_offset_blocks = 1;
    std::chrono::milliseconds per_window_timeout{60'000};
    int parallelism = 1;
    PruneRule prune = PruneRule::OrderDependence;

    /// Throws std::invalid_argument unless every field is positive.
    void validate() const;
};

struct Evidence
{
    assets::SideProfits attack;
    assets::SideProfits free;

    friend bool operator==(const Evidence&, const Evidence&) = default;
};

struct AttackTuple
{
    Digest t_a{};
    Digest t_v{};
    std::optional<Digest> t_ap;
    std::size_t i_a = 0;
    std::size_t i_v = 0;
    std::optional<std::size_t> i_p;
    std::size_t window_id = 0;
    assets::ActorSet actors;
    Evidence evidence;

    [[nodiscard]] chain::TupleIndex index() const { return {i_a, i_v, i_p}; }
    /// "i_a.i_v" or "i_a.i_v.i_p".
    [[nodiscard]] std::string id() const;
};

/// Shared-data footprint of one historical transaction.
struct TxAccess
{
    Address sender{};
    bool violation = false;
    minivm::KeySet def_clear_reads;
    /// Every key a step read, plus the sender's balance checked by the envelope.
    minivm::KeySet all_reads;
    /// Committed step writes plus envelope writes.
    minivm::KeySet writes;
};

TxAccess tx_access(const minivm::ExecutionTrace& trace);

/// Pair rule: same sender, either side a protocol violation, or no key written by T_a is
/// def-clear read by T_v.
bool should_prune(const minivm::ExecutionTrace& trace_a, const minivm::ExecutionTrace& trace_v);

/// Triple rule: the pair rule, or T_ap violated the protocol, or its sender is outside the
/// attacker set.
bool should_prune(const minivm::ExecutionTrace& trace_a, const minivm::ExecutionTrace& trace_v,
    const minivm::ExecutionTrace& trace_p);

struct WindowResult
{
    std::size_t window_id = 0;
    std::vector<AttackTuple> attacks;
    bool timed_out = false;
    std::size_t pairs_examined = 0;
    std::size_t pairs_pruned = 0;
};

WindowResult mine_window(const chain::Window& window, const MinerConfig& config);
/// As above with an explicit deadline in place of config.per_window_timeout.
WindowResult mine_window(
    const chain::Window& window, const MinerConfig& config, std::chrono::steady_clock::time_point deadline);

inline constexpr std::size_t kBruteForceLimit = 20;

/// Same loops as mine_window with only identity pruning. Throws std::invalid_argument for
/// windows above kBruteForceLimit transactions.
std::vector<AttackTuple> brute_force_mine(const chain::Window& window);

struct AttackDataset
{
    std::vector<AttackTuple> attacks;
    std::vector<std::size_t> timed_out_windows;
    std::size_t window_count = 0;
};

/// Windows processed on up to config.parallelism OpenMP threads.
AttackDataset mine_history(const chain::History& history, const MinerConfig& config);

/// Single-threaded reference for mine_history.
AttackDataset mine_history_serial(const chain::History& history, const MinerConfig& config);

/// Recomputes both scenarios; nullopt when the free scenario is infeasible.
std::optional<Evidence> recompute_evidence(const chain::History& history, const AttackTuple& attack);

}  // namespace frforge::miner
