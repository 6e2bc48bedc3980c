// frforge: front-running attack mining and vulnerability localization
// Copyright 2026 The frforge Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "frforge/minivm.hpp"

#include <map>
#include <set>
#include <span>

namespace frforge::assets
{
using AddressSet = std::set<Address>;

/// Signed balance deltas keyed by (actor, asset). Zero entries are never stored.
class ProfitVector
{
public:
    using Key = std::pair<Address, AssetKey>;

    void add(const Address& actor, const AssetKey& asset, const SignedAmount& delta);
    [[nodiscard]] SignedAmount get(const Address& actor, const AssetKey& asset) const;
    [[nodiscard]] const std::map<Key, SignedAmount>& entries() const noexcept { return entries_; }
    [[nodiscard]] bool empty() const noexcept { return entries_.empty(); }

    [[nodiscard]] ProfitVector restricted_to(const AddressSet& actors) const;
    /// Per-asset sums over the given actors.
    [[nodiscard]] std::map<AssetKey, SignedAmount> per_asset(const AddressSet& actors) const;

    ProfitVector& operator+=(const ProfitVector& other);
    friend ProfitVector operator+(ProfitVector a, const ProfitVector& b) { return a += b; }
    friend bool operator==(const ProfitVector&, const ProfitVector&) = default;

private:
    std::map<Key, SignedAmount> entries_;
};

enum class Comparison : std::uint8_t
{
    Gain,
    Loss,
    Neutral,
    Incomparable,
};

std::string_view comparison_name(Comparison c) noexcept;

struct ActorSet
{
    AddressSet attacker;
    AddressSet victim;

    [[nodiscard]] bool disjoint() const;
};

/// Attacker side: the sender of T_a plus the contract T_a invokes. Victim side: the sender of T_v.
ActorSet actor_set(const minivm::ExecutionTrace& trace_a, const minivm::ExecutionTrace& trace_v);

/// Sums committed transfers touching the actors. Gas fees are not counted.
ProfitVector profits_of(std::span<const minivm::ExecutionTrace* const> traces, const AddressSet& actors);
ProfitVector profits_of(const minivm::ExecutionTrace& trace, const AddressSet& actors);

/// Pareto comparison of scenario against free, summed per asset over the actor set.
Comparison compare(const ProfitVector& scenario, const ProfitVector& free, const AddressSet& actors);

struct SideProfits
{
    ProfitVector attacker;
    ProfitVector victim;

    friend bool operator==(const SideProfits&, const SideProfits&) = default;
};

/// Attacker gains and victim loses.
bool satisfies_properties(const SideProfits& attack, const SideProfits& free, const ActorSet& actors);

}  // namespace frforge::assets
