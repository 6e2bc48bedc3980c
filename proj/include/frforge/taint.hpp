// frforge: front-running attack mining and vulnerability localization
// Copyright 2026 The frforge Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "frforge/chain.hpp"
#include "frforge/miner.hpp"
#include "frforge/minivm.hpp"

#include <set>
#include <stdexcept>
#include <vector>

namespace frforge::taint
{
using minivm::Location;
using StepSet = std::set<std::uint32_t>;

class NoDivergence : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A mined attack whose T_a writes nothing that T_v reads def-clear.
class NoAlteredData : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct AttackAlteredKey
{
    minivm::SharedKey key;
    std::vector<Location> written_at;   // in T_a's trace
    std::vector<std::uint32_t> read_at;  // def-clear read steps in T_v's trace

    friend bool operator==(const AttackAlteredKey&, const AttackAlteredKey&) = default;
};

std::vector<AttackAlteredKey> attack_altered_data(
    const minivm::ExecutionTrace& trace_a, const minivm::ExecutionTrace& trace_v);

/// Throws NoAlteredData when the intersection is empty.
std::vector<AttackAlteredKey> attack_altered_data(const miner::AttackTuple& attack, const chain::History& history);

enum class PatternKind : std::uint8_t
{
    PathConditionAlteration,
    ComputationAlteration,
    GasEstimationGriefing,
};

std::string_view pattern_name(PatternKind k) noexcept;
PatternKind pattern_from_name(std::string_view name);

struct AttackPattern
{
    PatternKind kind = PatternKind::ComputationAlteration;
    std::optional<std::uint32_t> sink_step;  // index into the attack-scenario trace
    std::optional<Location> sink;

    friend bool operator==(const AttackPattern&, const AttackPattern&) = default;
};

/// Locations of committed transfers in execution order.
std::vector<Location> transfer_location_sequence(const minivm::ExecutionTrace& trace);

/// Throws NoDivergence when neither the transfer locations nor the amounts differ, or when
/// the locations differ without a branch that went the other way.
AttackPattern classify_pattern(const minivm::ExecutionTrace& trace_attack, const minivm::ExecutionTrace& trace_free);

/// Data dependences of every step: for each step, the earlier steps whose results it consumed.
std::vector<std::vector<std::uint32_t>> step_dependencies(const minivm::ExecutionTrace& trace);

/// Forward closure of the sources over the data dependences.
StepSet propagate_taint(const minivm::ExecutionTrace& trace, const StepSet& sources);

/// Steps the sink transitively depends on, the sink included.
StepSet backward_slice(const minivm::ExecutionTrace& trace, std::uint32_t sink);

struct InfluenceTrace
{
    std::uint32_t source_step = 0;
    Location source;
    minivm::SharedKey source_key;
    /// Every source read merged into this trace.
    std::vector<std::uint32_t> source_steps;
    std::uint32_t sink_step = 0;
    Location sink;
    std::vector<std::uint32_t> step_indices;
    std::vector<Location> steps;
    Digest identity{};

    friend bool operator==(const InfluenceTrace&, const InfluenceTrace&) = default;
};

/// Digest over the (contract, offset) sequence only.
Digest trace_identity(const std::vector<Location>& steps);

struct Localization
{
    AttackPattern pattern;
    bool skipped = false;  // gas griefing has no sink
    std::vector<AttackAlteredKey> altered;
    std::vector<InfluenceTrace> traces;
};

/// Influence traces within T_v's attack-scenario trace. Sources whose source-to-sink paths share
/// a step other than the sink are reported as one trace.
std::vector<InfluenceTrace> influence_traces(
    const minivm::ExecutionTrace& trace, const StepSet& sources, std::uint32_t sink);

Localization extract_influence_traces(const miner::AttackTuple& attack, const chain::History& history);

struct FunctionRef
{
    Address contract{};
    Selector selector = 0;
    std::string name;

    friend auto operator<=>(const FunctionRef&, const FunctionRef&) = default;
};

/// Public functions whose bodies contain a location of the trace.
std::set<FunctionRef> trace_functions(const InfluenceTrace& trace, const minivm::WorldState& state);

}  // namespace frforge::taint
