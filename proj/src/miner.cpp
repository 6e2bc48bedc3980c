// frforge: front-running attack mining and vulnerability localization
// Copyright 2026 The frforge Authors.
// SPDX-License-Identifier: Apache-2.0

#include "frforge/miner.hpp"

#include <omp.h>

#include <algorithm>
#include <exception>
#include <map>

namespace frforge::miner
{
namespace
{
using minivm::KeySet;
using minivm::TxStatus;
using Clock = std::chrono::steady_clock;

bool intersects(const KeySet& a, const KeySet& b)
{
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end())
    {
        if (*ia < *ib)
            ++ia;
        else if (*ib < *ia)
            ++ib;
        else
            return true;
    }
    return false;
}

KeySet intersection(const KeySet& a, const KeySet& b)
{
    KeySet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

enum class Outcome
{
    Attack,
    NotAttack,
    Infeasible,
};

struct Evaluation
{
    Outcome outcome = Outcome::NotAttack;
    Evidence evidence;
};

Evaluation evaluate(const chain::History& h, const chain::TupleIndex& t, const assets::ActorSet& actors)
{
    Evaluation e;
    const auto free = chain::attack_free_scenario_profits(h, t, actors);
    if (!free)
    {
        e.outcome = Outcome::Infeasible;
        return e;
    }
    e.evidence.attack = chain::attack_scenario_profits(h, t, actors).profits;
    e.evidence.free = free->profits;
    e.outcome = assets::satisfies_properties(e.evidence.attack, e.evidence.free, actors) ? Outcome::Attack :
                                                                                            Outcome::NotAttack;
    return e;
}

AttackTuple make_tuple(const chain::Window& w, const chain::TupleIndex& t, const assets::ActorSet& actors,
    Evidence evidence)
{
    AttackTuple at;
    at.t_a = w.tx(t.a).id;
    at.t_v = w.tx(t.v).id;
    if (t.p)
        at.t_ap = w.tx(*t.p).id;
    at.i_a = t.a;
    at.i_v = t.v;
    at.i_p = t.p;
    at.window_id = w.id;
    at.actors = actors;
    at.evidence = std::move(evidence);
    return at;
}

// Decides which pairs and triples of a window can be skipped.
class Pruner
{
public:
    Pruner(const chain::Window& w, std::optional<PruneRule> rule) : w_{w}, rule_{rule}
    {
        if (!rule_)
            return;
        for (std::size_t i = w.begin; i < w.end; ++i)
            acc_.push_back(tx_access(w.history->trace(i)));
    }

    // Pairs that can never be attacks under the attack model itself.
    bool identity_prune(std::size_t a, std::size_t v, const assets::ActorSet& actors) const
    {
        return w_.tx(a).sender == w_.tx(v).sender || !actors.disjoint();
    }

    bool prune_pair(std::size_t a, std::size_t v, const assets::ActorSet& actors)
    {
        if (!rule_)
            return false;
        const auto& ta = at(a);
        const auto& tv = at(v);
        if (ta.violation || tv.violation)
            return true;
        if (*rule_ == PruneRule::ConflictOnly)
            return !intersects(ta.writes, tv.def_clear_reads);

        dependent_ = is_dependent(a, v);
        if (dependent_)
            return false;
        for (std::size_t p = v + 1; p < w_.end; ++p)
        {
            if (!prune_triple(a, v, p, actors))
                return false;
        }
        return true;
    }

    // Valid only right after prune_pair(a, v, ...) returned false.
    bool prune_triple(std::size_t a, std::size_t v, std::size_t p, const assets::ActorSet& actors) const
    {
        if (!actors.attacker.count(w_.tx(p).sender))
            return true;
        if (!rule_)
            return false;
        const auto& tp = at(p);
        if (tp.violation)
            return true;
        if (*rule_ == PruneRule::ConflictOnly || dependent_)
            return false;
        // With T_a and T_v order-independent, T_ap only sees a different state through keys
        // written by skipped intermediates or written by both T_a and T_v.
        if (intersects(tp.all_reads, intersection(at(a).writes, at(v).writes)))
            return false;
        for (std::size_t k = a + 1; k < p; ++k)
        {
            if (k != v && intersects(tp.all_reads, at(k).writes))
                return false;
        }
        return true;
    }

private:
    const TxAccess& at(std::size_t global) const { return acc_[global - w_.begin]; }

    bool is_dependent(std::size_t a, std::size_t v) const
    {
        const auto& tv = at(v);
        for (std::size_t k = a; k < v; ++k)
        {
            if (intersects(tv.all_reads, at(k).writes))
                return true;
        }
        return intersects(at(a).all_reads, tv.writes);
    }

    const chain::Window& w_;
    std::optional<PruneRule> rule_;
    std::vector<TxAccess> acc_;
    bool dependent_ = true;
};

// The three nested loops shared by mine_window and brute_force_mine.
WindowResult run_loops(const chain::Window& w, std::optional<PruneRule> rule, std::optional<Clock::time_point> deadline)
{
    WindowResult res;
    res.window_id = w.id;
    const auto& h = *w.history;
    Pruner pruner{w, rule};
    for (std::size_t a = w.begin; a < w.end; ++a)
    {
        for (std::size_t v = a + 1; v < w.end; ++v)
        {
            if (deadline && Clock::now() > *deadline)
            {
                res.timed_out = true;
                return res;
            }
            ++res.pairs_examined;
            const auto actors = assets::actor_set(h.trace(a), h.trace(v));
            if (pruner.identity_prune(a, v, actors) || pruner.prune_pair(a, v, actors))
            {
                ++res.pairs_pruned;
                continue;
            }
            auto two = evaluate(h, {a, v, std::nullopt}, actors);
            if (two.outcome == Outcome::Attack)
            {
                res.attacks.push_back(make_tuple(w, {a, v, std::nullopt}, actors, std::move(two.evidence)));
                continue;
            }
            // Every triple of an infeasible pair replays the same infeasible prefix.
            if (two.outcome == Outcome::Infeasible)
                continue;
            for (std::size_t p = v + 1; p < w.end; ++p)
            {
                if (pruner.prune_triple(a, v, p, actors))
                    continue;
                auto three = evaluate(h, {a, v, p}, actors);
                if (three.outcome == Outcome::Attack)
                {
                    res.attacks.push_back(make_tuple(w, {a, v, p}, actors, std::move(three.evidence)));
                    break;
                }
            }
        }
    }
    return res;
}

bool tuple_less(const AttackTuple& x, const AttackTuple& y)
{
    return x.index() < y.index();
}

AttackDataset merge(const std::vector<chain::Window>& ws, std::vector<WindowResult>& results)
{
    AttackDataset ds;
    ds.window_count = ws.size();
    std::map<chain::TupleIndex, AttackTuple> unique;
    for (auto& r : results)
    {
        if (r.timed_out)
            ds.timed_out_windows.push_back(r.window_id);
        for (auto& at : r.attacks)
        {
            const auto key = at.index();
            const auto it = unique.find(key);
            if (it == unique.end() || at.window_id < it->second.window_id)
                unique.insert_or_assign(key, std::move(at));
        }
    }
    for (auto& [k, at] : unique)
        ds.attacks.push_back(std::move(at));
    std::sort(ds.attacks.begin(), ds.attacks.end(), tuple_less);
    std::sort(ds.timed_out_windows.begin(), ds.timed_out_windows.end());
    return ds;
}
}  // namespace

std::string_view prune_rule_name(PruneRule r) noexcept
{
    return r == PruneRule::ConflictOnly ? "conflict-only" : "order-dependence";
}

PruneRule prune_rule_from_name(std::string_view name)
{
    if (name == "conflict-only")
        return PruneRule::ConflictOnly;
    if (name == "order-dependence")
        return PruneRule::OrderDependence;
    throw std::invalid_argument("unknown prune rule: " + std::string(name));
}

void MinerConfig::validate() const
{
    if (window_size_blocks == 0 || window_offset_blocks == 0 || per_window_timeout.count() <= 0 || parallelism <= 0)
        throw std::invalid_argument("miner configuration values must be positive");
}

std::string AttackTuple::id() const
{
    std::string s = std::to_string(i_a) + "." + std::to_string(i_v);
    if (i_p)
        s += "." + std::to_string(*i_p);
    return s;
}

TxAccess tx_access(const minivm::ExecutionTrace& trace)
{
    TxAccess acc;
    acc.sender = trace.sender;
    if (trace.status == TxStatus::ProtocolViolation)
    {
        acc.violation = true;
        return acc;
    }
    auto sets = minivm::shared_access_sets(trace);
    acc.def_clear_reads = std::move(sets.def_clear_reads);
    acc.writes = std::move(sets.writes);
    for (const auto& k : minivm::envelope_writes(trace))
        acc.writes.insert(k);
    acc.all_reads.insert(minivm::SharedKey::balance(trace.sender));
    for (const auto& s : trace.steps)
    {
        if (s.shared_read)
            acc.all_reads.insert(s.shared_read->key);
    }
    return acc;
}

bool should_prune(const minivm::ExecutionTrace& trace_a, const minivm::ExecutionTrace& trace_v)
{
    if (trace_a.sender == trace_v.sender)
        return true;
    if (trace_a.status == TxStatus::ProtocolViolation || trace_v.status == TxStatus::ProtocolViolation)
        return true;
    return !intersects(tx_access(trace_a).writes, tx_access(trace_v).def_clear_reads);
}

bool should_prune(const minivm::ExecutionTrace& trace_a, const minivm::ExecutionTrace& trace_v,
    const minivm::ExecutionTrace& trace_p)
{
    if (should_prune(trace_a, trace_v) || trace_p.status == TxStatus::ProtocolViolation)
        return true;
    return !assets::actor_set(trace_a, trace_v).attacker.count(trace_p.sender);
}

WindowResult mine_window(const chain::Window& window, const MinerConfig& config)
{
    config.validate();
    return mine_window(window, config, Clock::now() + config.per_window_timeout);
}

WindowResult mine_window(const chain::Window& window, const MinerConfig& config, Clock::time_point deadline)
{
    config.validate();
    return run_loops(window, config.prune, deadline);
}

std::vector<AttackTuple> brute_force_mine(const chain::Window& window)
{
    if (window.size() > kBruteForceLimit)
        throw std::invalid_argument("brute force mining is limited to " + std::to_string(kBruteForceLimit) +
                                    " transactions per window");
    return run_loops(window, std::nullopt, std::nullopt).attacks;
}

AttackDataset mine_history(const chain::History& history, const MinerConfig& config)
{
    config.validate();
    const auto ws = chain::windows(history, config.window_size_blocks, config.window_offset_blocks);
    std::vector<WindowResult> results(ws.size());
    if (history.tx_count() > 0)
        (void)history.pre_state(0);  // replay once before the workers start

    std::exception_ptr error;
    const auto n = static_cast<std::int64_t>(ws.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(config.parallelism)
    for (std::int64_t i = 0; i < n; ++i)
    {
        try
        {
            results[static_cast<std::size_t>(i)] = mine_window(ws[static_cast<std::size_t>(i)], config);
        }
        catch (...)
        {
#pragma omp critical(frforge_miner_error)
            if (!error)
                error = std::current_exception();
        }
    }
    if (error)
        std::rethrow_exception(error);
    return merge(ws, results);
}

AttackDataset mine_history_serial(const chain::History& history, const MinerConfig& config)
{
    config.validate();
    const auto ws = chain::windows(history, config.window_size_blocks, config.window_offset_blocks);
    std::vector<WindowResult> results;
    results.reserve(ws.size());
    for (const auto& w : ws)
        results.push_back(mine_window(w, config));
    return merge(ws, results);
}

std::optional<Evidence> recompute_evidence(const chain::History& history, const AttackTuple& attack)
{
    const auto t = attack.index();
    const auto actors = assets::actor_set(history.trace(t.a), history.trace(t.v));
    const auto free = chain::attack_free_scenario_profits(history, t, actors);
    if (!free)
        return std::nullopt;
    return Evidence{chain::attack_scenario_profits(history, t, actors).profits, free->profits};
}

}  // namespace frforge::miner
