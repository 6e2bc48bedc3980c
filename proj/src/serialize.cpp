// frforge: front-running attack mining and vulnerability localization
// Copyright 2026 The frforge Authors.
// SPDX-License-Identifier: Apache-2.0

#include "frforge/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace frforge::serialize
{
namespace
{
using minivm::SharedKey;

const Json& field(const Json& j, const char* name)
{
    if (!j.is_object())
        throw FormatError(std::string("expected an object holding '") + name + "'");
    const auto it = j.find(name);
    if (it == j.end())
        throw FormatError(std::string("missing field '") + name + "'");
    return *it;
}

std::string str(const Json& j, const char* name)
{
    const auto& v = field(j, name);
    if (!v.is_string())
        throw FormatError(std::string("field '") + name + "' must be a string");
    return v.get<std::string>();
}

std::uint64_t u64(const Json& j, const char* name)
{
    const auto& v = field(j, name);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        throw FormatError(std::string("field '") + name + "' must be a non-negative integer");
    return v.get<std::uint64_t>();
}

bool has(const Json& j, const char* name)
{
    return j.is_object() && j.contains(name) && !j.at(name).is_null();
}

Address address(const Json& j, const char* name)
{
    return Address::from_hex(str(j, name));
}

Word word(const Json& j, const char* name)
{
    return parse_word(str(j, name));
}

Json address_list(const assets::AddressSet& s)
{
    Json a = Json::array();
    for (const auto& x : s)
        a.push_back(x.hex());
    return a;
}

assets::AddressSet address_set(const Json& j)
{
    assets::AddressSet s;
    for (const auto& x : j)
        s.insert(Address::from_hex(x.get<std::string>()));
    return s;
}

Json parse_line(std::string_view line, std::size_t line_no)
{
    try
    {
        return Json::parse(line);
    }
    catch (const nlohmann::json::exception& e)
    {
        throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
    }
}

template <typename F>
void for_each_line(std::string_view text, F&& f)
{
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size())
    {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos)
            nl = text.size();
        const auto line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos)
            continue;
        f(parse_line(line, line_no), line_no);
    }
}

// Rethrows JSON library errors as FormatError with some context.
template <typename F>
auto guarded(const char* what, F&& f) -> decltype(f())
{
    try
    {
        return f();
    }
    catch (const nlohmann::json::exception& e)
    {
        throw FormatError(std::string(what) + ": " + e.what());
    }
    catch (const std::invalid_argument& e)
    {
        throw FormatError(std::string(what) + ": " + e.what());
    }
}

Json side_json(const assets::SideProfits& s)
{
    return Json{{"attacker", to_json(s.attacker)}, {"victim", to_json(s.victim)}};
}

assets::SideProfits side_from_json(const Json& j)
{
    return {profit_vector_from_json(field(j, "attacker")), profit_vector_from_json(field(j, "victim"))};
}

Json function_ref_json(const taint::FunctionRef& f)
{
    return Json{{"contract", f.contract.hex()}, {"selector", to_hex(f.selector)}, {"name", f.name}};
}

taint::FunctionRef function_ref_from_json(const Json& j)
{
    return {address(j, "contract"), parse_selector(str(j, "selector")), str(j, "name")};
}

Json localized_trace_json(const benchcraft::LocalizedTrace& t)
{
    Json j = to_json(t.trace);
    Json fns = Json::array();
    for (const auto& f : t.functions)
        fns.push_back(function_ref_json(f));
    j["functions"] = std::move(fns);
    return j;
}

benchcraft::LocalizedTrace localized_trace_from_json(const Json& j)
{
    benchcraft::LocalizedTrace t;
    t.trace = influence_trace_from_json(j);
    for (const auto& f : field(j, "functions"))
        t.functions.insert(function_ref_from_json(f));
    return t;
}
}  // namespace

Json to_json(const AssetKey& a)
{
    if (a.is_ether())
        return Json{{"kind", "Ether"}};
    Json j{{"kind", "Token"}, {"standard", std::string(standard_name(a.standard))}, {"contract", a.contract.hex()}};
    if (a.token_id)
        j["token_id"] = to_hex(*a.token_id);
    return j;
}

AssetKey asset_from_json(const Json& j)
{
    return guarded("asset", [&] {
        const auto kind = str(j, "kind");
        if (kind == "Ether")
            return AssetKey::ether();
        if (kind != "Token")
            throw FormatError("unknown asset kind: " + kind);
        std::optional<Word> id;
        if (has(j, "token_id"))
            id = word(j, "token_id");
        return AssetKey::token(standard_from_name(str(j, "standard")), address(j, "contract"), id);
    });
}

Json to_json(const SharedKey& k)
{
    switch (k.kind)
    {
    case SharedKey::Kind::Balance:
        return Json{{"kind", "balance"}, {"address", k.address.hex()}};
    case SharedKey::Kind::Storage:
        return Json{{"kind", "storage"}, {"address", k.address.hex()}, {"slot", to_hex(k.slot)}};
    case SharedKey::Kind::Code:
        return Json{{"kind", "code"}, {"address", k.address.hex()}};
    }
    return {};
}

SharedKey key_from_json(const Json& j)
{
    const auto kind = str(j, "kind");
    const auto a = address(j, "address");
    if (kind == "balance")
        return SharedKey::balance(a);
    if (kind == "storage")
        return SharedKey::storage(a, word(j, "slot"));
    if (kind == "code")
        return SharedKey::code(a);
    throw FormatError("unknown key kind: " + kind);
}

Json to_json(const minivm::Location& l)
{
    return Json{{"contract", l.contract.hex()}, {"offset", l.offset}};
}

minivm::Location location_from_json(const Json& j)
{
    return {address(j, "contract"), static_cast<std::uint32_t>(u64(j, "offset"))};
}

Json to_json(const minivm::Contract& c)
{
    Json fns = Json::array();
    for (const auto& [sel, f] : c.functions)
    {
        fns.push_back(Json{{"selector", to_hex(sel)}, {"name", f.name}, {"entry", f.entry},
            {"visibility", f.visibility == minivm::Visibility::Public ? "public" : "internal"}});
    }
    Json code = Json::array();
    for (const auto& ins : c.code)
        code.push_back(ins.text());
    return Json{{"address", c.address.hex()}, {"functions", std::move(fns)}, {"code", std::move(code)}};
}

minivm::Contract contract_from_json(const Json& j)
{
    return guarded("contract", [&] {
        minivm::Contract c;
        c.address = address(j, "address");
        std::map<std::string, std::uint32_t> labels;
        const auto& code = field(j, "code");
        if (code.is_string())
        {
            auto assembled = minivm::assemble(code.get<std::string>());
            c.code = std::move(assembled.code);
            labels = std::move(assembled.labels);
        }
        else
        {
            std::string source;
            for (const auto& line : code)
                source += line.get<std::string>() + "\n";
            c.code = minivm::assemble(source).code;
        }
        for (const auto& f : field(j, "functions"))
        {
            minivm::FunctionInfo info;
            info.name = str(f, "name");
            const auto& entry = field(f, "entry");
            if (entry.is_string())
            {
                const auto it = labels.find(entry.get<std::string>());
                if (it == labels.end())
                    throw FormatError("unknown entry label: " + entry.get<std::string>());
                info.entry = it->second;
            }
            else
                info.entry = static_cast<std::uint32_t>(u64(f, "entry"));
            const auto vis = has(f, "visibility") ? str(f, "visibility") : std::string("public");
            if (vis != "public" && vis != "internal")
                throw FormatError("unknown visibility: " + vis);
            info.visibility = vis == "public" ? minivm::Visibility::Public : minivm::Visibility::Internal;
            const auto sel = has(f, "selector") ? parse_selector(str(f, "selector")) : selector_of(info.name);
            if (!c.functions.emplace(sel, info).second)
                throw FormatError("duplicate selector " + to_hex(sel) + " in " + c.address.hex());
        }
        c.validate();
        return c;
    });
}

Json to_json(const minivm::WorldState& s)
{
    Json accounts = Json::array();
    Json contracts = Json::array();
    Json storage = Json::array();
    for (const auto& [a, acc] : s.accounts())
    {
        accounts.push_back(Json{{"address", a.hex()}, {"balance", to_dec(acc.balance)}, {"nonce", acc.nonce}});
        if (acc.contract)
            contracts.push_back(to_json(*acc.contract));
        for (const auto& [slot, v] : acc.storage)
            storage.push_back(Json{{"address", a.hex()}, {"slot", to_hex(slot)}, {"value", to_hex(v)}});
    }
    return Json{{"accounts", std::move(accounts)}, {"contracts", std::move(contracts)}, {"storage", std::move(storage)}};
}

minivm::WorldState state_from_json(const Json& j)
{
    return guarded("state", [&] {
        minivm::WorldState s;
        if (has(j, "accounts"))
        {
            for (const auto& a : j.at("accounts"))
            {
                const auto addr = address(a, "address");
                s.set_balance(addr, has(a, "balance") ? word(a, "balance") : Word{0});
                s.set_nonce(addr, has(a, "nonce") ? u64(a, "nonce") : 0);
            }
        }
        if (has(j, "contracts"))
        {
            for (const auto& c : j.at("contracts"))
                s.set_contract(contract_from_json(c));
        }
        if (has(j, "storage"))
        {
            for (const auto& e : j.at("storage"))
                s.set_storage(address(e, "address"), word(e, "slot"), word(e, "value"));
        }
        return s;
    });
}

Json to_json(const minivm::TransactionMsg& tx)
{
    Json args = Json::array();
    for (const auto& a : tx.args)
        args.push_back(to_hex(a));
    return Json{{"sender", tx.sender.hex()}, {"nonce", tx.nonce}, {"target", tx.target.hex()},
        {"selector", to_hex(tx.selector)}, {"args", std::move(args)}, {"value", to_dec(tx.value)},
        {"gas_limit", tx.gas_limit}, {"gas_price", tx.gas_price}, {"id", to_hex(tx.id)}};
}

minivm::TransactionMsg tx_from_json(const Json& j)
{
    return guarded("transaction", [&] {
        minivm::TransactionMsg tx;
        tx.sender = address(j, "sender");
        tx.nonce = u64(j, "nonce");
        tx.target = address(j, "target");
        tx.selector = parse_selector(str(j, "selector"));
        for (const auto& a : field(j, "args"))
            tx.args.push_back(parse_word(a.get<std::string>()));
        tx.value = has(j, "value") ? word(j, "value") : Word{0};
        tx.gas_limit = u64(j, "gas_limit");
        tx.gas_price = has(j, "gas_price") ? u64(j, "gas_price") : 1;
        if (tx.gas_limit == 0 || tx.gas_price == 0)
            throw FormatError("gas_limit and gas_price must be positive");
        const auto computed = tx.compute_id();
        if (has(j, "id"))
        {
            tx.id = parse_digest(str(j, "id"));
            if (tx.id != computed)
                throw FormatError("transaction id " + to_hex(tx.id) + " does not match its content");
        }
        else
            tx.id = computed;
        return tx;
    });
}

Json to_json(const minivm::TransferRecord& t)
{
    Json j{{"asset", to_json(t.asset)}, {"from", t.from.hex()}, {"to", t.to.hex()}, {"amount", to_dec(t.amount)},
        {"location", to_json(t.location)}};
    j["step"] = t.step ? Json(*t.step) : Json(nullptr);
    return j;
}

Json to_json(const minivm::StepRecord& s)
{
    auto words = [](const std::vector<Word>& ws) {
        Json a = Json::array();
        for (const auto& w : ws)
            a.push_back(to_hex(w));
        return a;
    };
    auto access = [](const std::optional<minivm::SharedAccess>& a, bool with_def_clear) {
        if (!a)
            return Json(nullptr);
        Json j = to_json(a->key);
        if (with_def_clear)
            j["def_clear"] = a->def_clear;
        return j;
    };
    Json j;
    j["index"] = s.index;
    j["location"] = to_json(s.location);
    j["opcode"] = s.instr.mnemonic();
    j["stack_in"] = words(s.stack_in);
    j["stack_out"] = words(s.stack_out);
    j["shared_read"] = access(s.shared_read, true);
    j["shared_write"] = access(s.shared_write, false);
    j["branch"] = s.branch_taken ? Json{{"taken", *s.branch_taken}} : Json(nullptr);
    if (s.call_edge)
    {
        j["call_edge"] = Json{{"callee", s.call_edge->callee.hex()}, {"selector", to_hex(s.call_edge->selector)},
            {"args_digest", to_hex(s.call_edge->args_digest)}};
    }
    else
        j["call_edge"] = nullptr;
    j["transfer"] = s.transfer ? to_json(*s.transfer) : Json(nullptr);
    j["gas_cost"] = s.gas_cost;
    j["frame"] = s.frame;
    return j;
}

std::string trace_to_jsonl(const minivm::ExecutionTrace& trace)
{
    Json transfers = Json::array();
    for (const auto& t : trace.transfers)
        transfers.push_back(to_json(t));
    Json calls = Json::array();
    for (const auto& f : trace.calls)
    {
        calls.push_back(Json{{"id", f.id}, {"parent", f.parent ? Json(*f.parent) : Json(nullptr)},
            {"call_step", f.call_step ? Json(*f.call_step) : Json(nullptr)}, {"contract", f.contract.hex()},
            {"caller", f.caller.hex()}, {"selector", to_hex(f.selector)}, {"depth", f.depth},
            {"reverted", f.reverted}});
    }
    Json header{{"tx", to_hex(trace.tx)}, {"sender", trace.sender.hex()}, {"target", trace.target.hex()},
        {"status", std::string(minivm::status_name(trace.status))}, {"gas_used", trace.gas_used},
        {"fee", to_dec(trace.fee)}, {"steps", trace.steps.size()}, {"transfers", std::move(transfers)},
        {"calls", std::move(calls)}};
    std::string out = header.dump() + "\n";
    for (const auto& s : trace.steps)
        out += to_json(s).dump() + "\n";
    return out;
}

std::string history_to_jsonl(const chain::History& h)
{
    std::string out = Json{{"genesis", to_json(h.genesis())}}.dump() + "\n";
    for (const auto& b : h.blocks())
    {
        Json txs = Json::array();
        for (const auto& tx : b.txs)
            txs.push_back(to_json(tx));
        out += Json{{"number", b.number}, {"txs", std::move(txs)}}.dump() + "\n";
    }
    return out;
}

chain::History history_from_jsonl(std::string_view text)
{
    std::optional<minivm::WorldState> genesis;
    std::vector<chain::Block> blocks;
    for_each_line(text, [&](const Json& j, std::size_t line_no) {
        if (!genesis)
        {
            if (!has(j, "genesis"))
                throw FormatError("line " + std::to_string(line_no) + ": history must start with a genesis record");
            genesis = state_from_json(j.at("genesis"));
            return;
        }
        guarded("block", [&] {
            chain::Block b;
            b.number = u64(j, "number");
            for (const auto& tx : field(j, "txs"))
                b.txs.push_back(tx_from_json(tx));
            blocks.push_back(std::move(b));
            return 0;
        });
    });
    if (!genesis)
        return chain::History{};
    try
    {
        return chain::History{std::move(*genesis), std::move(blocks)};
    }
    catch (const std::invalid_argument& e)
    {
        throw FormatError(e.what());
    }
}

Digest history_digest(const chain::History& h)
{
    return sha256(history_to_jsonl(h));
}

Json to_json(const assets::ProfitVector& pv)
{
    Json a = Json::array();
    for (const auto& [k, v] : pv.entries())
        a.push_back(Json{{"actor", k.first.hex()}, {"asset", to_json(k.second)}, {"delta", to_dec(v)}});
    return a;
}

assets::ProfitVector profit_vector_from_json(const Json& j)
{
    return guarded("profit vector", [&] {
        assets::ProfitVector pv;
        for (const auto& e : j)
            pv.add(address(e, "actor"), asset_from_json(field(e, "asset")), parse_signed(str(e, "delta")));
        return pv;
    });
}

Json to_json(const miner::AttackTuple& a)
{
    Json j;
    j["id"] = a.id();
    j["t_a"] = to_hex(a.t_a);
    j["t_v"] = to_hex(a.t_v);
    j["t_ap"] = a.t_ap ? Json(to_hex(*a.t_ap)) : Json(nullptr);
    j["i_a"] = a.i_a;
    j["i_v"] = a.i_v;
    j["i_p"] = a.i_p ? Json(*a.i_p) : Json(nullptr);
    j["window_id"] = a.window_id;
    j["attacker"] = address_list(a.actors.attacker);
    j["victim"] = address_list(a.actors.victim);
    j["evidence"] = Json{{"attack", side_json(a.evidence.attack)}, {"free", side_json(a.evidence.free)}};
    return j;
}

miner::AttackTuple attack_from_json(const Json& j)
{
    return guarded("attack", [&] {
        miner::AttackTuple a;
        a.t_a = parse_digest(str(j, "t_a"));
        a.t_v = parse_digest(str(j, "t_v"));
        if (has(j, "t_ap"))
            a.t_ap = parse_digest(str(j, "t_ap"));
        a.i_a = u64(j, "i_a");
        a.i_v = u64(j, "i_v");
        if (has(j, "i_p"))
            a.i_p = u64(j, "i_p");
        a.window_id = u64(j, "window_id");
        a.actors.attacker = address_set(field(j, "attacker"));
        a.actors.victim = address_set(field(j, "victim"));
        const auto& ev = field(j, "evidence");
        a.evidence.attack = side_from_json(field(ev, "attack"));
        a.evidence.free = side_from_json(field(ev, "free"));
        return a;
    });
}

std::string dataset_to_jsonl(const miner::AttackDataset& ds, const Digest& history)
{
    Json summary{{"record", "summary"}, {"history_digest", to_hex(history)}, {"windows", ds.window_count},
        {"timed_out_windows", ds.timed_out_windows}, {"attacks", ds.attacks.size()}};
    std::string out = summary.dump() + "\n";
    for (const auto& a : ds.attacks)
        out += to_json(a).dump() + "\n";
    return out;
}

DatasetFile dataset_from_jsonl(std::string_view text)
{
    DatasetFile f;
    bool first = true;
    for_each_line(text, [&](const Json& j, std::size_t line_no) {
        if (first)
        {
            first = false;
            if (!has(j, "record") || j.at("record") != "summary")
                throw FormatError("line " + std::to_string(line_no) + ": attack dataset must start with a summary");
            f.history = parse_digest(str(j, "history_digest"));
            f.dataset.window_count = u64(j, "windows");
            for (const auto& w : field(j, "timed_out_windows"))
                f.dataset.timed_out_windows.push_back(w.get<std::size_t>());
            return;
        }
        f.dataset.attacks.push_back(attack_from_json(j));
    });
    if (first)
        throw FormatError("empty attack dataset file");
    return f;
}

Json to_json(const taint::AttackPattern& p)
{
    Json j{{"kind", std::string(taint::pattern_name(p.kind))}};
    j["sink_step"] = p.sink_step ? Json(*p.sink_step) : Json(nullptr);
    j["sink"] = p.sink ? to_json(*p.sink) : Json(nullptr);
    return j;
}

taint::AttackPattern pattern_from_json(const Json& j)
{
    return guarded("pattern", [&] {
        taint::AttackPattern p;
        p.kind = taint::pattern_from_name(str(j, "kind"));
        if (has(j, "sink_step"))
            p.sink_step = static_cast<std::uint32_t>(u64(j, "sink_step"));
        if (has(j, "sink"))
            p.sink = location_from_json(j.at("sink"));
        return p;
    });
}

Json to_json(const taint::InfluenceTrace& t)
{
    Json steps = Json::array();
    for (const auto& l : t.steps)
        steps.push_back(to_json(l));
    Json j;
    j["source"] = Json{{"loc", to_json(t.source)}, {"key", to_json(t.source_key)}, {"step", t.source_step},
        {"merged", t.source_steps}};
    j["sink"] = to_json(t.sink);
    j["sink_step"] = t.sink_step;
    j["steps"] = std::move(steps);
    j["step_indices"] = t.step_indices;
    j["identity"] = to_hex(t.identity);
    return j;
}

taint::InfluenceTrace influence_trace_from_json(const Json& j)
{
    return guarded("influence trace", [&] {
        taint::InfluenceTrace t;
        const auto& src = field(j, "source");
        t.source = location_from_json(field(src, "loc"));
        t.source_key = key_from_json(field(src, "key"));
        t.source_step = static_cast<std::uint32_t>(u64(src, "step"));
        t.source_steps = field(src, "merged").get<std::vector<std::uint32_t>>();
        t.sink = location_from_json(field(j, "sink"));
        t.sink_step = static_cast<std::uint32_t>(u64(j, "sink_step"));
        for (const auto& l : field(j, "steps"))
            t.steps.push_back(location_from_json(l));
        t.step_indices = field(j, "step_indices").get<std::vector<std::uint32_t>>();
        t.identity = parse_digest(str(j, "identity"));
        if (t.identity != taint::trace_identity(t.steps))
            throw FormatError("influence trace identity does not match its steps");
        return t;
    });
}

Json to_json(const benchcraft::LocalizedAttack& a)
{
    Json j;
    j["attack_id"] = a.attack.id();
    j["status"] = !a.error.empty() ? "error" : (a.skipped ? "skipped" : "localized");
    j["error"] = a.error.empty() ? Json(nullptr) : Json(a.error);
    j["pattern"] = a.pattern ? to_json(*a.pattern) : Json(nullptr);
    Json traces = Json::array();
    for (const auto& t : a.traces)
        traces.push_back(localized_trace_json(t));
    j["influence_traces"] = std::move(traces);
    j["attack"] = to_json(a.attack);
    return j;
}

benchcraft::LocalizedAttack localized_from_json(const Json& j)
{
    return guarded("localized attack", [&] {
        benchcraft::LocalizedAttack a;
        a.attack = attack_from_json(field(j, "attack"));
        const auto status = str(j, "status");
        a.skipped = status == "skipped";
        if (status == "error")
            a.error = str(j, "error");
        if (has(j, "pattern"))
            a.pattern = pattern_from_json(j.at("pattern"));
        for (const auto& t : field(j, "influence_traces"))
            a.traces.push_back(localized_trace_from_json(t));
        return a;
    });
}

std::string localized_to_jsonl(const std::vector<benchcraft::LocalizedAttack>& attacks, const Digest& history)
{
    std::string out = Json{{"record", "summary"}, {"history_digest", to_hex(history)}, {"attacks", attacks.size()}}
                          .dump() +
                      "\n";
    for (const auto& a : attacks)
        out += to_json(a).dump() + "\n";
    return out;
}

LocalizedFile localized_from_jsonl(std::string_view text)
{
    LocalizedFile f;
    bool first = true;
    for_each_line(text, [&](const Json& j, std::size_t line_no) {
        if (first)
        {
            first = false;
            if (!has(j, "record") || j.at("record") != "summary")
                throw FormatError("line " + std::to_string(line_no) + ": localization file must start with a summary");
            f.history = parse_digest(str(j, "history_digest"));
            return;
        }
        f.attacks.push_back(localized_from_json(j));
    });
    if (first)
        throw FormatError("empty localization file");
    return f;
}

Json to_json(const benchcraft::BenchmarkEntry& e)
{
    Json labels = Json::array();
    for (const auto& l : e.labels)
    {
        labels.push_back(Json{{"contract", l.contract.hex()}, {"selector", to_hex(l.selector)}, {"name", l.name},
            {"attack_id", l.attack_id}});
    }
    return Json{{"attack_id", e.attack.id()}, {"pattern", to_json(e.pattern)},
        {"influence_trace", localized_trace_json(e.influence_trace)}, {"labels", std::move(labels)},
        {"attack", to_json(e.attack)}};
}

benchcraft::BenchmarkEntry benchmark_entry_from_json(const Json& j)
{
    return guarded("benchmark entry", [&] {
        benchcraft::BenchmarkEntry e;
        e.attack = attack_from_json(field(j, "attack"));
        e.pattern = pattern_from_json(field(j, "pattern"));
        e.influence_trace = localized_trace_from_json(field(j, "influence_trace"));
        for (const auto& l : field(j, "labels"))
        {
            e.labels.insert(
                {address(l, "contract"), parse_selector(str(l, "selector")), str(l, "name"), str(l, "attack_id")});
        }
        return e;
    });
}

std::string benchmark_to_jsonl(const benchcraft::Benchmark& b)
{
    std::string out;
    for (const auto& e : b)
        out += to_json(e).dump() + "\n";
    return out;
}

benchcraft::Benchmark benchmark_from_jsonl(std::string_view text)
{
    benchcraft::Benchmark b;
    for_each_line(text, [&](const Json& j, std::size_t) { b.push_back(benchmark_entry_from_json(j)); });
    return b;
}

benchcraft::DetectorReport report_from_json(const Json& j)
{
    return guarded("detector report", [&] {
        benchcraft::DetectorReport r;
        r.tool = str(j, "tool");
        for (const auto& f : field(j, "flagged"))
            r.flagged.emplace(address(f, "contract"), parse_selector(str(f, "selector")));
        return r;
    });
}

Json to_json(const benchcraft::DetectorReport& r)
{
    Json flagged = Json::array();
    for (const auto& [c, s] : r.flagged)
        flagged.push_back(Json{{"contract", c.hex()}, {"selector", to_hex(s)}});
    return Json{{"tool", r.tool}, {"flagged", std::move(flagged)}};
}

Json to_json(const benchcraft::EvalResult& r)
{
    Json per = Json::object();
    for (const auto& [id, tp] : r.per_attack)
        per[id] = tp ? "TP" : "FN";
    return Json{{"tp", r.tp}, {"fn", r.fn}, {"total", r.tp + r.fn}, {"recall", r.recall}, {"per_attack", per}};
}

std::string eval_table(const benchcraft::EvalResult& r, std::string_view tool)
{
    std::ostringstream os;
    os << "tool: " << tool << "\n";
    std::size_t width = 6;
    for (const auto& [id, tp] : r.per_attack)
        width = std::max(width, id.size());
    os << std::left << std::setw(static_cast<int>(width)) << "attack"
       << "  result\n";
    for (const auto& [id, tp] : r.per_attack)
        os << std::left << std::setw(static_cast<int>(width)) << id << "  " << (tp ? "TP" : "FN") << "\n";
    os << "tp " << r.tp << "  fn " << r.fn << "  recall " << std::fixed << std::setprecision(4) << r.recall << "\n";
    return os.str();
}

std::string read_file(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::filesystem::path& p, std::string_view content)
{
    auto tmp = p;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out.flush())
            throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, p);
}

}  // namespace frforge::serialize
