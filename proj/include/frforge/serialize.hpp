// frforge: front-running attack mining and vulnerability localization
// Copyright 2026 The frforge Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "frforge/benchcraft.hpp"
#include "frforge/chain.hpp"
#include "frforge/miner.hpp"
#include "frforge/minivm.hpp"
#include "frforge/taint.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace frforge::serialize
{
using Json = nlohmann::ordered_json;

Json to_json(const AssetKey& a);
AssetKey asset_from_json(const Json& j);

Json to_json(const minivm::SharedKey& k);
minivm::SharedKey key_from_json(const Json& j);

Json to_json(const minivm::Location& l);
minivm::Location location_from_json(const Json& j);

/// code is an array of instruction texts; a string is accepted too and assembled, in which
/// case function entries may name labels.
Json to_json(const minivm::Contract& c);
minivm::Contract contract_from_json(const Json& j);

Json to_json(const minivm::WorldState& s);
minivm::WorldState state_from_json(const Json& j);

/// Throws FormatError when the stored id does not match the content.
Json to_json(const minivm::TransactionMsg& tx);
minivm::TransactionMsg tx_from_json(const Json& j);

Json to_json(const minivm::TransferRecord& t);
Json to_json(const minivm::StepRecord& s);

/// Header line followed by one line per step.
std::string trace_to_jsonl(const minivm::ExecutionTrace& trace);

std::string history_to_jsonl(const chain::History& h);
chain::History history_from_jsonl(std::string_view text);
/// SHA-256 of the canonical JSON-lines form.
Digest history_digest(const chain::History& h);

Json to_json(const assets::ProfitVector& pv);
assets::ProfitVector profit_vector_from_json(const Json& j);

Json to_json(const miner::AttackTuple& a);
miner::AttackTuple attack_from_json(const Json& j);

struct DatasetFile
{
    Digest history{};
    miner::AttackDataset dataset;
};

/// Summary record, then one attack per line.
std::string dataset_to_jsonl(const miner::AttackDataset& ds, const Digest& history);
DatasetFile dataset_from_jsonl(std::string_view text);

Json to_json(const taint::AttackPattern& p);
taint::AttackPattern pattern_from_json(const Json& j);

Json to_json(const taint::InfluenceTrace& t);
taint::InfluenceTrace influence_trace_from_json(const Json& j);

Json to_json(const benchcraft::LocalizedAttack& a);
benchcraft::LocalizedAttack localized_from_json(const Json& j);

struct LocalizedFile
{
    Digest history{};
    std::vector<benchcraft::LocalizedAttack> attacks;
};

std::string localized_to_jsonl(const std::vector<benchcraft::LocalizedAttack>& attacks, const Digest& history);
LocalizedFile localized_from_jsonl(std::string_view text);

Json to_json(const benchcraft::BenchmarkEntry& e);
benchcraft::BenchmarkEntry benchmark_entry_from_json(const Json& j);
std::string benchmark_to_jsonl(const benchcraft::Benchmark& b);
benchcraft::Benchmark benchmark_from_jsonl(std::string_view text);

benchcraft::DetectorReport report_from_json(const Json& j);
Json to_json(const benchcraft::DetectorReport& r);

Json to_json(const benchcraft::EvalResult& r);
std::string eval_table(const benchcraft::EvalResult& r, std::string_view tool);

std::string read_file(const std::filesystem::path& p);
/// Writes through a temporary file in the same directory and renames it into place.
void write_file_atomic(const std::filesystem::path& p, std::string_view content);

}  // namespace frforge::serialize
