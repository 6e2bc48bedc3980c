// frforge: front-running attack mining and vulnerability localization
// Copyright 2026 The frforge Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "frforge/miner.hpp"
#include "frforge/taint.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace frforge::benchcraft
{
struct LocalizedTrace
{
    taint::InfluenceTrace trace;
    std::set<taint::FunctionRef> functions;  // public functions the trace executes

    friend bool operator==(const LocalizedTrace&, const LocalizedTrace&) = default;
};

/// One localization record: the attack, its pattern and influence traces.
struct LocalizedAttack
{
    miner::AttackTuple attack;
    std::optional<taint::AttackPattern> pattern;
    bool skipped = false;
    std::string error;  // set when localization failed
    std::vector<LocalizedTrace> traces;
};

/// Runs localization for one mined attack. Failures are recorded in `error` rather than thrown:
/// "no_altered_data", "no_divergence" or "infeasible".
LocalizedAttack localize(const miner::AttackTuple& attack, const chain::History& history);

struct VulnLabel
{
    Address contract{};
    Selector selector = 0;
    std::string name;
    std::string attack_id;

    friend auto operator<=>(const VulnLabel&, const VulnLabel&) = default;
};

struct BenchmarkEntry
{
    miner::AttackTuple attack;
    taint::AttackPattern pattern;
    LocalizedTrace influence_trace;
    std::set<VulnLabel> labels;
};

using Benchmark = std::vector<BenchmarkEntry>;

/// Number of distinct attacks whose influence traces touch each contract.
std::map<Address, std::size_t> contract_popularity(const std::vector<LocalizedAttack>& attacks);

struct TopSelection
{
    std::vector<Address> top;
    std::vector<LocalizedAttack> confined;  // single-trace attacks touching only top contracts
};

/// Ties on popularity are broken by ascending address.
TopSelection select_top_and_filter(const std::vector<LocalizedAttack>& attacks, std::size_t n);

struct SaturationPoint
{
    int percent = 0;
    std::size_t distinct_functions = 0;

    friend bool operator==(const SaturationPoint&, const SaturationPoint&) = default;
};

/// Distinct (contract, selector) labels in growing prefixes of one seeded shuffle, at 1..100%.
std::vector<SaturationPoint> saturation_curve(const std::vector<LocalizedAttack>& attacks, std::uint64_t seed);

/// Keeps single-trace attacks, one per influence-trace identity (the earliest), labeled with
/// the public functions on the trace. Attacks whose trace runs no public function are dropped.
Benchmark dedupe_and_build(const std::vector<LocalizedAttack>& attacks);

/// The localization records a benchmark was built from, for rebuilding.
std::vector<LocalizedAttack> as_localized(const Benchmark& benchmark);

struct DetectorReport
{
    std::string tool;
    std::set<std::pair<Address, Selector>> flagged;
};

struct EvalResult
{
    std::size_t tp = 0;
    std::size_t fn = 0;
    double recall = 0.0;
    std::map<std::string, bool> per_attack;  // attack id -> true positive
};

EvalResult evaluate_detector(const Benchmark& benchmark, const DetectorReport& report);

}  // namespace frforge::benchcraft
