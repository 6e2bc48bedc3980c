// frforge: front-running attack mining and vulnerability localization
// Copyright 2026 The frforge Authors.
// SPDX-License-Identifier: Apache-2.0

#include "frforge/assets.hpp"

namespace frforge::assets
{
void ProfitVector::add(const Address& actor, const AssetKey& asset, const SignedAmount& delta)
{
    if (delta == 0)
        return;
    const Key k{actor, asset};
    auto it = entries_.find(k);
    if (it == entries_.end())
    {
        entries_.emplace(k, delta);
        return;
    }
    it->second += delta;
    if (it->second == 0)
        entries_.erase(it);
}

SignedAmount ProfitVector::get(const Address& actor, const AssetKey& asset) const
{
    const auto it = entries_.find({actor, asset});
    return it == entries_.end() ? SignedAmount{0} : it->second;
}

ProfitVector ProfitVector::restricted_to(const AddressSet& actors) const
{
    ProfitVector out;
    for (const auto& [k, v] : entries_)
    {
        if (actors.count(k.first))
            out.entries_.emplace(k, v);
    }
    return out;
}

std::map<AssetKey, SignedAmount> ProfitVector::per_asset(const AddressSet& actors) const
{
    std::map<AssetKey, SignedAmount> out;
    for (const auto& [k, v] : entries_)
    {
        if (actors.count(k.first))
            out[k.second] += v;
    }
    std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
    return out;
}

ProfitVector& ProfitVector::operator+=(const ProfitVector& other)
{
    for (const auto& [k, v] : other.entries_)
        add(k.first, k.second, v);
    return *this;
}

std::string_view comparison_name(Comparison c) noexcept
{
    switch (c)
    {
    case Comparison::Gain:
        return "Gain";
    case Comparison::Loss:
        return "Loss";
    case Comparison::Neutral:
        return "Neutral";
    case Comparison::Incomparable:
        return "Incomparable";
    }
    return "?";
}

bool ActorSet::disjoint() const
{
    for (const auto& a : attacker)
    {
        if (victim.count(a))
            return false;
    }
    return true;
}

ActorSet actor_set(const minivm::ExecutionTrace& trace_a, const minivm::ExecutionTrace& trace_v)
{
    ActorSet s;
    s.attacker.insert(trace_a.sender);
    if (!trace_a.calls.empty())
        s.attacker.insert(trace_a.calls.front().contract);
    s.victim.insert(trace_v.sender);
    return s;
}

ProfitVector profits_of(std::span<const minivm::ExecutionTrace* const> traces, const AddressSet& actors)
{
    ProfitVector pv;
    for (const auto* t : traces)
    {
        for (const auto& tr : t->transfers)
        {
            const SignedAmount amount{tr.amount};
            if (actors.count(tr.to))
                pv.add(tr.to, tr.asset, amount);
            if (actors.count(tr.from))
                pv.add(tr.from, tr.asset, -amount);
        }
    }
    return pv;
}

ProfitVector profits_of(const minivm::ExecutionTrace& trace, const AddressSet& actors)
{
    const minivm::ExecutionTrace* one[] = {&trace};
    return profits_of(one, actors);
}

Comparison compare(const ProfitVector& scenario, const ProfitVector& free, const AddressSet& actors)
{
    auto d = scenario.per_asset(actors);
    for (const auto& [asset, v] : free.per_asset(actors))
        d[asset] -= v;
    bool pos = false;
    bool neg = false;
    for (const auto& [asset, v] : d)
    {
        pos = pos || v > 0;
        neg = neg || v < 0;
    }
    if (pos && neg)
        return Comparison::Incomparable;
    if (pos)
        return Comparison::Gain;
    if (neg)
        return Comparison::Loss;
    return Comparison::Neutral;
}

bool satisfies_properties(const SideProfits& attack, const SideProfits& free, const ActorSet& actors)
{
    return compare(attack.attacker, free.attacker, actors.attacker) == Comparison::Gain &&
           compare(attack.victim, free.victim, actors.victim) == Comparison::Loss;
}

}  // namespace frforge::assets
