// frforge: front-running attack mining and vulnerability localization
// Copyright 2026 The frforge Authors.
// SPDX-License-Identifier: Apache-2.0

#include "frforge/taint.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>

namespace frforge::taint
{
namespace
{
using minivm::ExecutionTrace;
using minivm::Opcode;
using minivm::SharedKey;
using minivm::StepRecord;

constexpr std::int64_t kNoProducer = -1;

// Keys whose current contents a step's behavior depends on.
std::vector<SharedKey> consumed_keys(const StepRecord& s)
{
    std::vector<SharedKey> keys;
    switch (s.instr.op)
    {
    case Opcode::SLOAD:
    case Opcode::BALANCE:
    case Opcode::TRANSFER:
    case Opcode::TTRANSFER:
        if (s.shared_read)
            keys.push_back(s.shared_read->key);
        for (auto& k : minivm::step_writes(s))
            keys.push_back(k);
        break;
    default:
        break;
    }
    return keys;
}

// Shadow of one executing frame: the producing step of every stack word.
struct FrameShadow
{
    std::uint32_t frame = 0;
    std::vector<std::int64_t> stack;
    std::vector<std::int64_t> args;
    std::int64_t value = kNoProducer;
    std::uint32_t nret = 0;
    bool has_caller = false;
    std::size_t journal_mark = 0;
    std::optional<std::uint32_t> last_step;
};

class DependenceBuilder
{
public:
    explicit DependenceBuilder(const ExecutionTrace& t) : t_{t}, deps_(t.steps.size()) {}

    std::vector<std::vector<std::uint32_t>> build()
    {
        if (t_.calls.empty())
            return std::move(deps_);
        frames_.emplace_back();
        for (std::uint32_t i = 0; i < t_.steps.size(); ++i)
        {
            const auto& s = t_.steps[i];
            while (!frames_.empty() && frames_.back().frame != s.frame)
                finish_frame();
            if (frames_.empty())
                throw std::logic_error("step " + std::to_string(i) + " belongs to no active frame");
            step(i, s);
        }
        while (!frames_.empty())
            finish_frame();
        for (auto& d : deps_)
        {
            std::sort(d.begin(), d.end());
            d.erase(std::unique(d.begin(), d.end()), d.end());
        }
        return std::move(deps_);
    }

private:
    void add_dep(std::uint32_t i, std::int64_t producer)
    {
        if (producer != kNoProducer)
            deps_[i].push_back(static_cast<std::uint32_t>(producer));
    }

    std::int64_t pop(FrameShadow& f)
    {
        if (f.stack.empty())
            throw std::logic_error("shadow stack underflow");
        const auto p = f.stack.back();
        f.stack.pop_back();
        return p;
    }

    void step(std::uint32_t i, const StepRecord& s)
    {
        auto& f = frames_.back();
        f.last_step = i;
        const auto& ins = s.instr;

        if (ins.op == Opcode::DUP)
        {
            f.stack.push_back(f.stack.at(f.stack.size() - ins.a));
            return;
        }
        if (ins.op == Opcode::SWAP)
        {
            std::swap(f.stack.at(f.stack.size() - 1), f.stack.at(f.stack.size() - 1 - ins.a));
            return;
        }

        std::vector<std::int64_t> ops;
        for (std::size_t k = 0; k < s.stack_in.size(); ++k)
            ops.push_back(pop(f));

        switch (ins.op)
        {
        case Opcode::POP:
            break;
        case Opcode::JUMPI:
            add_dep(i, ops.at(1));
            break;
        case Opcode::CALLDATALOAD:
            add_dep(i, ops.at(0));
            if (s.stack_in.at(0) < f.args.size())
                add_dep(i, f.args[static_cast<std::size_t>(s.stack_in[0])]);
            break;
        case Opcode::CALLVALUE:
            add_dep(i, f.value);
            break;
        default:
            for (const auto p : ops)
                add_dep(i, p);
            break;
        }
        for (const auto& k : consumed_keys(s))
        {
            const auto it = last_writer_.find(k);
            if (it != last_writer_.end())
                add_dep(i, it->second);
        }
        for (const auto& k : minivm::step_writes(s))
        {
            const auto it = last_writer_.find(k);
            journal_.push_back({k, it == last_writer_.end() ? std::nullopt : std::optional{it->second}});
            last_writer_[k] = i;
        }

        if (ins.op == Opcode::CALL)
        {
            if (s.call_edge && s.call_edge->frame)
            {
                FrameShadow callee;
                callee.frame = *s.call_edge->frame;
                callee.args.assign(ops.begin() + 3, ops.end());
                callee.value = ops.at(1);
                callee.nret = ins.b;
                callee.has_caller = true;
                callee.journal_mark = journal_.size();
                frames_.push_back(std::move(callee));
            }
            else
            {
                f.stack.insert(f.stack.end(), ins.b + 1, kNoProducer);
            }
            return;
        }
        for (std::size_t k = 0; k < s.stack_out.size(); ++k)
            f.stack.push_back(i);
    }

    void finish_frame()
    {
        FrameShadow done = std::move(frames_.back());
        frames_.pop_back();
        const bool ok = !t_.calls.at(done.frame).reverted;
        if (!ok)
        {
            while (journal_.size() > done.journal_mark)
            {
                const auto& [k, prev] = journal_.back();
                if (prev)
                    last_writer_[k] = *prev;
                else
                    last_writer_.erase(k);
                journal_.pop_back();
            }
        }
        if (!done.has_caller || frames_.empty())
            return;
        std::int64_t ret_step = kNoProducer;
        std::uint32_t ret_words = 0;
        if (ok && done.last_step && t_.steps[*done.last_step].instr.op == Opcode::RETURN)
        {
            ret_step = *done.last_step;
            ret_words = t_.steps[*done.last_step].instr.a;
        }
        auto& parent = frames_.back();
        for (std::uint32_t k = done.nret; k-- > 0;)
            parent.stack.push_back(k < ret_words ? ret_step : kNoProducer);
        parent.stack.push_back(kNoProducer);
    }

    const ExecutionTrace& t_;
    std::vector<std::vector<std::uint32_t>> deps_;
    std::vector<FrameShadow> frames_;
    std::map<SharedKey, std::int64_t> last_writer_;
    std::vector<std::pair<SharedKey, std::optional<std::int64_t>>> journal_;
};

StepSet forward_closure(const std::vector<std::vector<std::uint32_t>>& deps, const StepSet& sources)
{
    StepSet tainted;
    if (sources.empty())
        return tainted;
    for (std::uint32_t i = *sources.begin(); i < deps.size(); ++i)
    {
        if (sources.count(i))
        {
            tainted.insert(i);
            continue;
        }
        for (const auto d : deps[i])
        {
            if (tainted.count(d))
            {
                tainted.insert(i);
                break;
            }
        }
    }
    return tainted;
}

StepSet backward_closure(const std::vector<std::vector<std::uint32_t>>& deps, std::uint32_t sink)
{
    StepSet seen{sink};
    std::deque<std::uint32_t> work{sink};
    while (!work.empty())
    {
        const auto i = work.front();
        work.pop_front();
        for (const auto d : deps.at(i))
        {
            if (seen.insert(d).second)
                work.push_back(d);
        }
    }
    return seen;
}

struct UnionFind
{
    std::vector<std::size_t> parent;

    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

    std::size_t find(std::size_t x)
    {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    }

    void unite(std::size_t a, std::size_t b)
    {
        a = find(a);
        b = find(b);
        if (a != b)
            parent[std::max(a, b)] = std::min(a, b);
    }
};
}  // namespace

std::vector<AttackAlteredKey> attack_altered_data(const ExecutionTrace& trace_a, const ExecutionTrace& trace_v)
{
    using minivm::TxStatus;
    std::vector<AttackAlteredKey> out;
    if (trace_a.status == TxStatus::ProtocolViolation || trace_v.status == TxStatus::ProtocolViolation)
        return out;
    auto writes = minivm::shared_access_sets(trace_a).writes;
    for (const auto& k : minivm::envelope_writes(trace_a))
        writes.insert(k);
    const auto reads = minivm::shared_access_sets(trace_v).def_clear_reads;
    const auto committed = trace_a.committed_mask();
    for (const auto& key : writes)
    {
        if (!reads.count(key))
            continue;
        AttackAlteredKey ak;
        ak.key = key;
        for (std::size_t i = 0; i < trace_a.steps.size(); ++i)
        {
            if (!committed[i])
                continue;
            const auto ws = minivm::step_writes(trace_a.steps[i]);
            if (std::find(ws.begin(), ws.end(), key) != ws.end())
                ak.written_at.push_back(trace_a.steps[i].location);
        }
        for (const auto& s : trace_v.steps)
        {
            if (s.shared_read && s.shared_read->def_clear && s.shared_read->key == key)
                ak.read_at.push_back(s.index);
        }
        out.push_back(std::move(ak));
    }
    return out;
}

std::vector<AttackAlteredKey> attack_altered_data(const miner::AttackTuple& attack, const chain::History& history)
{
    auto out = attack_altered_data(history.trace(attack.i_a), history.trace(attack.i_v));
    if (out.empty())
        throw NoAlteredData("attack " + attack.id() + ": T_v reads nothing def-clear that T_a wrote");
    return out;
}

std::string_view pattern_name(PatternKind k) noexcept
{
    switch (k)
    {
    case PatternKind::PathConditionAlteration:
        return "PathConditionAlteration";
    case PatternKind::ComputationAlteration:
        return "ComputationAlteration";
    case PatternKind::GasEstimationGriefing:
        return "GasEstimationGriefing";
    }
    return "?";
}

PatternKind pattern_from_name(std::string_view name)
{
    for (const auto k : {PatternKind::PathConditionAlteration, PatternKind::ComputationAlteration,
             PatternKind::GasEstimationGriefing})
    {
        if (pattern_name(k) == name)
            return k;
    }
    throw FormatError("unknown attack pattern: " + std::string(name));
}

std::vector<Location> transfer_location_sequence(const ExecutionTrace& trace)
{
    std::vector<Location> out;
    out.reserve(trace.transfers.size());
    for (const auto& t : trace.transfers)
        out.push_back(t.location);
    return out;
}

AttackPattern classify_pattern(const ExecutionTrace& trace_attack, const ExecutionTrace& trace_free)
{
    using minivm::TxStatus;
    AttackPattern pat;
    if (trace_attack.status == TxStatus::OutOfGas && trace_free.status != TxStatus::OutOfGas)
    {
        pat.kind = PatternKind::GasEstimationGriefing;
        return pat;
    }

    if (transfer_location_sequence(trace_attack) != transfer_location_sequence(trace_free))
    {
        const auto& sa = trace_attack.steps;
        const auto& sf = trace_free.steps;
        std::optional<std::uint32_t> branch;
        for (std::size_t i = 0; i < std::min(sa.size(), sf.size()); ++i)
        {
            if (sa[i].location != sf[i].location)
                break;
            if (sa[i].instr.op == Opcode::JUMPI && sa[i].branch_taken != sf[i].branch_taken)
                branch = static_cast<std::uint32_t>(i);
        }
        if (!branch)
            throw NoDivergence("transfer locations differ but no branch took a different direction");
        pat.kind = PatternKind::PathConditionAlteration;
        pat.sink_step = branch;
        pat.sink = sa[*branch].location;
        return pat;
    }

    for (std::size_t j = 0; j < trace_attack.transfers.size(); ++j)
    {
        const auto& ta = trace_attack.transfers[j];
        const auto& tf = trace_free.transfers[j];
        if (ta.amount == tf.amount || !ta.step)
            continue;
        pat.kind = PatternKind::ComputationAlteration;
        pat.sink_step = ta.step;
        pat.sink = ta.location;
        return pat;
    }
    throw NoDivergence("victim transfers are identical in both scenarios");
}

std::vector<std::vector<std::uint32_t>> step_dependencies(const ExecutionTrace& trace)
{
    return DependenceBuilder{trace}.build();
}

StepSet propagate_taint(const ExecutionTrace& trace, const StepSet& sources)
{
    return forward_closure(step_dependencies(trace), sources);
}

StepSet backward_slice(const ExecutionTrace& trace, std::uint32_t sink)
{
    return backward_closure(step_dependencies(trace), sink);
}

Digest trace_identity(const std::vector<Location>& steps)
{
    std::vector<Word> words;
    words.reserve(steps.size() * 2);
    for (const auto& l : steps)
    {
        words.push_back(l.contract.to_word());
        words.push_back(l.offset);
    }
    return word_bytes(hash_words(words));
}

std::vector<InfluenceTrace> influence_traces(const ExecutionTrace& trace, const StepSet& sources, std::uint32_t sink)
{
    const auto deps = step_dependencies(trace);
    const auto back = backward_closure(deps, sink);

    std::vector<std::uint32_t> srcs;
    std::vector<StepSet> paths;
    for (const auto s : sources)
    {
        if (s == sink || s >= trace.steps.size())
            continue;
        const auto fwd = forward_closure(deps, {s});
        if (!fwd.count(sink))
            continue;
        StepSet path;
        std::set_intersection(fwd.begin(), fwd.end(), back.begin(), back.end(), std::inserter(path, path.end()));
        srcs.push_back(s);
        paths.push_back(std::move(path));
    }

    UnionFind uf{srcs.size()};
    std::map<std::uint32_t, std::size_t> owner;
    for (std::size_t g = 0; g < paths.size(); ++g)
    {
        for (const auto step : paths[g])
        {
            if (step == sink)
                continue;
            const auto [it, fresh] = owner.emplace(step, g);
            if (!fresh)
                uf.unite(it->second, g);
        }
    }

    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t g = 0; g < paths.size(); ++g)
        groups[uf.find(g)].push_back(g);

    std::vector<InfluenceTrace> out;
    for (const auto& [root, members] : groups)
    {
        StepSet all;
        InfluenceTrace it;
        for (const auto g : members)
        {
            all.insert(paths[g].begin(), paths[g].end());
            it.source_steps.push_back(srcs[g]);
        }
        std::sort(it.source_steps.begin(), it.source_steps.end());
        it.source_step = it.source_steps.front();
        it.source = trace.steps[it.source_step].location;
        if (trace.steps[it.source_step].shared_read)
            it.source_key = trace.steps[it.source_step].shared_read->key;
        it.sink_step = sink;
        it.sink = trace.steps[sink].location;
        it.step_indices.assign(all.begin(), all.end());
        for (const auto i : it.step_indices)
            it.steps.push_back(trace.steps[i].location);
        it.identity = trace_identity(it.steps);
        out.push_back(std::move(it));
    }
    std::sort(out.begin(), out.end(),
        [](const InfluenceTrace& a, const InfluenceTrace& b) { return a.source_step < b.source_step; });
    return out;
}

Localization extract_influence_traces(const miner::AttackTuple& attack, const chain::History& history)
{
    const auto& tv = history.trace(attack.i_v);
    const auto actors = assets::actor_set(history.trace(attack.i_a), tv);
    const auto free = chain::attack_free_scenario_profits(history, attack.index(), actors);
    if (!free)
        throw std::logic_error("attack " + attack.id() + " has no feasible attack-free scenario");

    Localization loc;
    loc.pattern = classify_pattern(tv, free->traces.front());
    if (loc.pattern.kind == PatternKind::GasEstimationGriefing)
    {
        loc.skipped = true;
        loc.altered = attack_altered_data(history.trace(attack.i_a), tv);
        return loc;
    }
    loc.altered = attack_altered_data(attack, history);

    StepSet sources;
    for (const auto& ak : loc.altered)
    {
        for (const auto r : ak.read_at)
        {
            if (r != *loc.pattern.sink_step)
                sources.insert(r);
        }
    }
    loc.traces = influence_traces(tv, sources, *loc.pattern.sink_step);
    return loc;
}

std::set<FunctionRef> trace_functions(const InfluenceTrace& trace, const minivm::WorldState& state)
{
    std::set<FunctionRef> out;
    for (const auto& l : trace.steps)
    {
        const auto* c = state.contract(l.contract);
        if (!c)
            continue;
        const auto f = c->function_at(l.offset);
        if (f && f->second.visibility == minivm::Visibility::Public)
            out.insert({l.contract, f->first, f->second.name});
    }
    return out;
}

}  // namespace frforge::taint
