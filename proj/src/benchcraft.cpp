// frforge: front-running attack mining and vulnerability localization
// Copyright 2026 The frforge Authors.
// SPDX-License-Identifier: Apache-2.0

#include "frforge/benchcraft.hpp"

#include <algorithm>
#include <random>

namespace frforge::benchcraft
{
namespace
{
std::set<Address> contracts_of(const LocalizedAttack& a)
{
    std::set<Address> out;
    for (const auto& t : a.traces)
    {
        for (const auto& l : t.trace.steps)
            out.insert(l.contract);
    }
    return out;
}

std::set<std::pair<Address, Selector>> label_keys(const LocalizedAttack& a)
{
    std::set<std::pair<Address, Selector>> out;
    for (const auto& t : a.traces)
    {
        for (const auto& f : t.functions)
            out.emplace(f.contract, f.selector);
    }
    return out;
}
}  // namespace

LocalizedAttack localize(const miner::AttackTuple& attack, const chain::History& history)
{
    LocalizedAttack out;
    out.attack = attack;
    try
    {
        auto loc = taint::extract_influence_traces(attack, history);
        out.pattern = loc.pattern;
        out.skipped = loc.skipped;
        const auto& state = history.pre_state(attack.i_v);
        for (auto& t : loc.traces)
        {
            auto fns = taint::trace_functions(t, state);
            out.traces.push_back({std::move(t), std::move(fns)});
        }
    }
    catch (const taint::NoAlteredData&)
    {
        out.error = "no_altered_data";
    }
    catch (const taint::NoDivergence&)
    {
        out.error = "no_divergence";
    }
    catch (const std::logic_error&)
    {
        out.error = "infeasible";
    }
    return out;
}

std::map<Address, std::size_t> contract_popularity(const std::vector<LocalizedAttack>& attacks)
{
    std::map<Address, std::size_t> out;
    for (const auto& a : attacks)
    {
        for (const auto& c : contracts_of(a))
            ++out[c];
    }
    return out;
}

TopSelection select_top_and_filter(const std::vector<LocalizedAttack>& attacks, std::size_t n)
{
    if (n == 0)
        throw std::invalid_argument("top-N requires N >= 1");
    const auto pop = contract_popularity(attacks);
    std::vector<std::pair<Address, std::size_t>> ranked(pop.begin(), pop.end());
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) { return x.second > y.second; });
    if (ranked.size() > n)
        ranked.resize(n);

    TopSelection sel;
    std::set<Address> top;
    for (const auto& [addr, count] : ranked)
    {
        sel.top.push_back(addr);
        top.insert(addr);
    }
    for (const auto& a : attacks)
    {
        if (a.traces.size() != 1)
            continue;
        const auto cs = contracts_of(a);
        if (std::all_of(cs.begin(), cs.end(), [&](const Address& c) { return top.count(c) > 0; }))
            sel.confined.push_back(a);
    }
    return sel;
}

std::vector<SaturationPoint> saturation_curve(const std::vector<LocalizedAttack>& attacks, std::uint64_t seed)
{
    std::vector<std::size_t> order(attacks.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::mt19937_64 rng{seed};
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<SaturationPoint> curve;
    std::set<std::pair<Address, Selector>> seen;
    std::size_t taken = 0;
    for (int pct = 1; pct <= 100; ++pct)
    {
        const auto k = (attacks.size() * static_cast<std::size_t>(pct) + 99) / 100;
        for (; taken < k; ++taken)
        {
            const auto labels = label_keys(attacks[order[taken]]);
            seen.insert(labels.begin(), labels.end());
        }
        curve.push_back({pct, seen.size()});
    }
    return curve;
}

Benchmark dedupe_and_build(const std::vector<LocalizedAttack>& attacks)
{
    std::map<Digest, const LocalizedAttack*> earliest;
    for (const auto& a : attacks)
    {
        if (a.traces.size() != 1 || !a.pattern || a.skipped)
            continue;
        if (a.traces.front().functions.empty())
            continue;
        const auto& id = a.traces.front().trace.identity;
        const auto it = earliest.find(id);
        if (it == earliest.end() || a.attack.index() < it->second->attack.index())
            earliest[id] = &a;
    }

    Benchmark out;
    for (const auto& [id, a] : earliest)
    {
        BenchmarkEntry e;
        e.attack = a->attack;
        e.pattern = *a->pattern;
        e.influence_trace = a->traces.front();
        for (const auto& f : e.influence_trace.functions)
            e.labels.insert({f.contract, f.selector, f.name, a->attack.id()});
        out.push_back(std::move(e));
    }
    std::sort(out.begin(), out.end(),
        [](const BenchmarkEntry& x, const BenchmarkEntry& y) { return x.attack.index() < y.attack.index(); });
    return out;
}

std::vector<LocalizedAttack> as_localized(const Benchmark& benchmark)
{
    std::vector<LocalizedAttack> out;
    for (const auto& e : benchmark)
    {
        LocalizedAttack a;
        a.attack = e.attack;
        a.pattern = e.pattern;
        a.traces.push_back(e.influence_trace);
        out.push_back(std::move(a));
    }
    return out;
}

EvalResult evaluate_detector(const Benchmark& benchmark, const DetectorReport& report)
{
    EvalResult r;
    for (const auto& e : benchmark)
    {
        const bool hit = std::any_of(e.labels.begin(), e.labels.end(),
            [&](const VulnLabel& l) { return report.flagged.count({l.contract, l.selector}) > 0; });
        r.per_attack[e.attack.id()] = hit;
        if (hit)
            ++r.tp;
        else
            ++r.fn;
    }
    const auto total = r.tp + r.fn;
    r.recall = total == 0 ? 0.0 : static_cast<double>(r.tp) / static_cast<double>(total);
    return r;
}

}  // namespace frforge::benchcraft
