// frforge: front-running attack mining and vulnerability localization
// Copyright 2026 The frforge Authors.
// SPDX-License-Identifier: Apache-2.0

#include "frforge/minivm.hpp"

#include <array>
#include <charconv>

namespace frforge::minivm
{
namespace
{
constexpr std::array<std::string_view, 34> kOpcodeNames = {"STOP", "PUSH", "POP", "DUP", "SWAP", "ADD",
    "SUB", "MUL", "DIV", "MOD", "LT", "GT", "EQ", "ISZERO", "AND", "OR", "NOT", "JUMP", "JUMPI", "SLOAD",
    "SSTORE", "BALANCE", "CALLER", "ORIGIN", "CALLVALUE", "CALLDATALOAD", "TRANSFER", "TTRANSFER", "CALL",
    "RETURN", "REVERT", "HASH", "GASLEFT", "LOG"};

static_assert(kOpcodeNames.size() == static_cast<std::size_t>(Opcode::LOG) + 1);

// Domain separator for ledger slots, so they never collide with small user slots.
const Word kLedgerDomain = digest_word(sha256(std::string_view{"frforge.token-ledger"}));

std::uint32_t parse_u32(std::string_view s)
{
    std::uint32_t v = 0;
    const auto* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end)
        throw FormatError("invalid immediate: " + std::string(s));
    return v;
}

bool storage_equal(const std::map<Word, Word>& a, const std::map<Word, Word>& b)
{
    // Zero values are equivalent to absent entries.
    auto ia = a.begin();
    auto ib = b.begin();
    while (true)
    {
        while (ia != a.end() && ia->second == 0)
            ++ia;
        while (ib != b.end() && ib->second == 0)
            ++ib;
        if (ia == a.end() || ib == b.end())
            return ia == a.end() && ib == b.end();
        if (ia->first != ib->first || ia->second != ib->second)
            return false;
        ++ia;
        ++ib;
    }
}
}  // namespace

std::string_view opcode_name(Opcode op) noexcept
{
    return kOpcodeNames[static_cast<std::size_t>(op)];
}

std::optional<Opcode> opcode_from_name(std::string_view name) noexcept
{
    for (std::size_t i = 0; i < kOpcodeNames.size(); ++i)
    {
        if (kOpcodeNames[i] == name)
            return static_cast<Opcode>(i);
    }
    return std::nullopt;
}

std::string Instruction::mnemonic() const
{
    std::string out{opcode_name(op)};
    switch (op)
    {
    case Opcode::DUP:
    case Opcode::SWAP:
    case Opcode::HASH:
    case Opcode::LOG:
    case Opcode::RETURN:
        out += " " + std::to_string(a);
        break;
    case Opcode::CALL:
        out += " " + std::to_string(a) + " " + std::to_string(b);
        break;
    default:
        break;
    }
    return out;
}

std::string Instruction::text() const
{
    if (op == Opcode::PUSH)
        return "PUSH " + to_hex(value);
    return mnemonic();
}

Instruction parse_mnemonic(std::string_view text)
{
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (pos < text.size())
    {
        while (pos < text.size() && text[pos] == ' ')
            ++pos;
        const auto start = pos;
        while (pos < text.size() && text[pos] != ' ')
            ++pos;
        if (pos > start)
            parts.push_back(text.substr(start, pos - start));
    }
    if (parts.empty())
        throw FormatError("empty mnemonic");
    const auto op = opcode_from_name(parts[0]);
    if (!op)
        throw FormatError("unknown opcode: " + std::string(parts[0]));
    Instruction ins{*op};
    std::size_t expected = 0;
    switch (*op)
    {
    case Opcode::DUP:
    case Opcode::SWAP:
    case Opcode::HASH:
    case Opcode::LOG:
    case Opcode::RETURN:
        expected = 1;
        break;
    case Opcode::CALL:
        expected = 2;
        break;
    default:
        break;
    }
    if (parts.size() != expected + 1)
        throw FormatError("wrong operand count for " + std::string(parts[0]));
    if (expected >= 1)
        ins.a = parse_u32(parts[1]);
    if (expected >= 2)
        ins.b = parse_u32(parts[2]);
    return ins;
}

void Contract::validate() const
{
    for (const auto& [sel, fn] : functions)
    {
        if (fn.entry >= code.size())
            throw std::invalid_argument(
                "function " + fn.name + " entry " + std::to_string(fn.entry) + " outside code of " + address.hex());
    }
}

std::optional<std::pair<Selector, FunctionInfo>> Contract::function_at(std::uint32_t offset) const
{
    std::optional<std::pair<Selector, FunctionInfo>> best;
    for (const auto& [sel, fn] : functions)
    {
        if (fn.entry <= offset && (!best || fn.entry > best->second.entry))
            best = std::make_pair(sel, fn);
    }
    return best;
}

std::string SharedKey::describe() const
{
    switch (kind)
    {
    case Kind::Balance:
        return "balance(" + address.hex() + ")";
    case Kind::Storage:
        return "storage(" + address.hex() + "," + to_hex(slot) + ")";
    case Kind::Code:
        return "code(" + address.hex() + ")";
    }
    return "?";
}

std::strong_ordering operator<=>(const SharedKey& a, const SharedKey& b)
{
    if (auto c = a.kind <=> b.kind; c != 0)
        return c;
    if (auto c = a.address <=> b.address; c != 0)
        return c;
    if (a.slot < b.slot)
        return std::strong_ordering::less;
    if (a.slot > b.slot)
        return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

Word token_ledger_slot(const Word& token_id, const Address& holder)
{
    const std::array<Word, 3> words{kLedgerDomain, token_id, holder.to_word()};
    return hash_words(words);
}

bool operator==(const Account& a, const Account& b)
{
    if (a.balance != b.balance || a.nonce != b.nonce)
        return false;
    if (static_cast<bool>(a.contract) != static_cast<bool>(b.contract))
        return false;
    if (a.contract && a.contract != b.contract && !(*a.contract == *b.contract))
        return false;
    return storage_equal(a.storage, b.storage);
}

const Account* WorldState::find(const Address& a) const
{
    const auto it = accounts_.find(a);
    return it == accounts_.end() ? nullptr : &it->second;
}

Word WorldState::balance(const Address& a) const
{
    const auto* acc = find(a);
    return acc ? acc->balance : Word{0};
}

std::uint64_t WorldState::nonce(const Address& a) const
{
    const auto* acc = find(a);
    return acc ? acc->nonce : 0;
}

const Contract* WorldState::contract(const Address& a) const
{
    const auto* acc = find(a);
    return acc ? acc->contract.get() : nullptr;
}

Word WorldState::storage(const Address& a, const Word& slot) const
{
    const auto* acc = find(a);
    if (!acc)
        return 0;
    const auto it = acc->storage.find(slot);
    return it == acc->storage.end() ? Word{0} : it->second;
}

Word WorldState::token_balance(const AssetKey& asset, const Address& holder) const
{
    if (asset.is_ether())
        return balance(holder);
    return storage(asset.contract, token_ledger_slot(asset.token_id.value_or(0), holder));
}

void WorldState::drop_if_empty(const Address& a)
{
    const auto it = accounts_.find(a);
    if (it == accounts_.end())
        return;
    const auto& acc = it->second;
    if (acc.balance == 0 && acc.nonce == 0 && !acc.contract && acc.storage.empty())
        accounts_.erase(it);
}

void WorldState::set_balance(const Address& a, const Word& v)
{
    account(a).balance = v;
    drop_if_empty(a);
}

void WorldState::set_nonce(const Address& a, std::uint64_t n)
{
    account(a).nonce = n;
    drop_if_empty(a);
}

void WorldState::set_contract(Contract c)
{
    c.validate();
    const auto addr = c.address;
    account(addr).contract = std::make_shared<const Contract>(std::move(c));
}

void WorldState::set_storage(const Address& a, const Word& slot, const Word& v)
{
    auto& st = account(a).storage;
    if (v == 0)
        st.erase(slot);
    else
        st[slot] = v;
    drop_if_empty(a);
}

void WorldState::set_token_balance(const AssetKey& asset, const Address& holder, const Word& v)
{
    if (asset.is_ether())
        set_balance(holder, v);
    else
        set_storage(asset.contract, token_ledger_slot(asset.token_id.value_or(0), holder), v);
}

Word WorldState::total_ether() const
{
    Word total = 0;
    for (const auto& [addr, acc] : accounts_)
        total += acc.balance;
    return total;
}

std::uint64_t gas_cost(Opcode op) noexcept
{
    switch (op)
    {
    case Opcode::SSTORE:
        return 20;
    case Opcode::SLOAD:
        return 5;
    case Opcode::CALL:
        return 40;
    case Opcode::TRANSFER:
    case Opcode::TTRANSFER:
        return 10;
    case Opcode::HASH:
        return 30;
    default:
        return 1;
    }
}

Digest TransactionMsg::compute_id() const
{
    std::vector<Word> words;
    words.reserve(8 + args.size());
    words.push_back(sender.to_word());
    words.push_back(nonce);
    words.push_back(target.to_word());
    words.push_back(selector);
    words.push_back(value);
    words.push_back(gas_limit);
    words.push_back(gas_price);
    words.push_back(args.size());
    words.insert(words.end(), args.begin(), args.end());
    std::vector<std::uint8_t> buf;
    buf.reserve(words.size() * 32);
    for (const auto& w : words)
    {
        const auto b = word_bytes(w);
        buf.insert(buf.end(), b.begin(), b.end());
    }
    return sha256(buf);
}

TransactionMsg& TransactionMsg::seal()
{
    id = compute_id();
    return *this;
}

std::string_view status_name(TxStatus s) noexcept
{
    switch (s)
    {
    case TxStatus::Success:
        return "Success";
    case TxStatus::Reverted:
        return "Reverted";
    case TxStatus::OutOfGas:
        return "OutOfGas";
    case TxStatus::ProtocolViolation:
        return "ProtocolViolation";
    }
    return "?";
}

TxStatus status_from_name(std::string_view name)
{
    for (const auto s : {TxStatus::Success, TxStatus::Reverted, TxStatus::OutOfGas, TxStatus::ProtocolViolation})
    {
        if (status_name(s) == name)
            return s;
    }
    throw FormatError("unknown status: " + std::string(name));
}

std::vector<bool> ExecutionTrace::committed_mask() const
{
    std::vector<bool> mask(steps.size(), status == TxStatus::Success);
    if (status != TxStatus::Success)
        return mask;
    // A frame is effectively reverted if it or any ancestor reverted.
    std::vector<bool> dead(calls.size(), false);
    for (const auto& f : calls)
    {
        bool d = f.reverted;
        if (f.parent && *f.parent < dead.size())
            d = d || dead[*f.parent];
        if (f.id < dead.size())
            dead[f.id] = d;
    }
    for (std::size_t i = 0; i < steps.size(); ++i)
    {
        const auto fr = steps[i].frame;
        if (fr < dead.size() && dead[fr])
            mask[i] = false;
    }
    return mask;
}

std::vector<SharedKey> step_writes(const StepRecord& step)
{
    std::vector<SharedKey> out;
    if (step.shared_write)
        out.push_back(step.shared_write->key);
    if (step.transfer)
    {
        const auto& t = *step.transfer;
        if (t.asset.is_ether())
        {
            out.push_back(SharedKey::balance(t.from));
            out.push_back(SharedKey::balance(t.to));
        }
        else
        {
            const Word id = t.asset.token_id.value_or(0);
            out.push_back(SharedKey::storage(t.asset.contract, token_ledger_slot(id, t.from)));
            out.push_back(SharedKey::storage(t.asset.contract, token_ledger_slot(id, t.to)));
        }
    }
    return out;
}

AccessSets shared_access_sets(const ExecutionTrace& trace)
{
    if (trace.status == TxStatus::ProtocolViolation)
        throw std::invalid_argument("shared_access_sets: protocol-violation trace has no steps to analyze");
    AccessSets out;
    const auto committed = trace.committed_mask();
    for (std::size_t i = 0; i < trace.steps.size(); ++i)
    {
        const auto& s = trace.steps[i];
        if (s.shared_read && s.shared_read->def_clear)
            out.def_clear_reads.insert(s.shared_read->key);
        if (committed[i])
        {
            for (const auto& k : step_writes(s))
                out.writes.insert(k);
        }
    }
    return out;
}

KeySet envelope_writes(const ExecutionTrace& trace)
{
    KeySet out;
    if (trace.status == TxStatus::ProtocolViolation)
        return out;
    out.insert(SharedKey::balance(trace.sender));
    for (const auto& t : trace.transfers)
    {
        if (!t.step)
        {
            out.insert(SharedKey::balance(t.from));
            out.insert(SharedKey::balance(t.to));
        }
    }
    return out;
}

}  // namespace frforge::minivm
