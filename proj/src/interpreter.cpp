// frforge: front-running attack mining and vulnerability localization
// Copyright 2026 The frforge Authors.
// SPDX-License-Identifier: Apache-2.0

#include "frforge/minivm.hpp"

namespace frforge::minivm
{
namespace
{
struct OutOfGasAbort
{
};

struct FrameResult
{
    bool ok = false;
    std::vector<Word> ret;
};

struct JournalEntry
{
    bool is_balance = true;
    Address address{};
    Word slot{};
    Word old{};
};

// Number of words an opcode pops, or -1 when it depends on runtime operands.
int pop_count(const Instruction& ins)
{
    switch (ins.op)
    {
    case Opcode::STOP:
    case Opcode::PUSH:
    case Opcode::CALLER:
    case Opcode::ORIGIN:
    case Opcode::CALLVALUE:
    case Opcode::GASLEFT:
    case Opcode::REVERT:
        return 0;
    case Opcode::POP:
    case Opcode::ISZERO:
    case Opcode::NOT:
    case Opcode::JUMP:
    case Opcode::SLOAD:
    case Opcode::BALANCE:
    case Opcode::CALLDATALOAD:
        return 1;
    case Opcode::DUP:
        return static_cast<int>(ins.a);
    case Opcode::SWAP:
        return static_cast<int>(ins.a) + 1;
    case Opcode::ADD:
    case Opcode::SUB:
    case Opcode::MUL:
    case Opcode::DIV:
    case Opcode::MOD:
    case Opcode::LT:
    case Opcode::GT:
    case Opcode::EQ:
    case Opcode::AND:
    case Opcode::OR:
    case Opcode::JUMPI:
    case Opcode::SSTORE:
    case Opcode::TRANSFER:
        return 2;
    case Opcode::TTRANSFER:
        return -1;
    case Opcode::CALL:
        return 3 + static_cast<int>(ins.a);
    case Opcode::RETURN:
    case Opcode::HASH:
    case Opcode::LOG:
        return static_cast<int>(ins.a);
    }
    return 0;
}

int push_count(const Instruction& ins)
{
    switch (ins.op)
    {
    case Opcode::PUSH:
    case Opcode::DUP:
    case Opcode::ADD:
    case Opcode::SUB:
    case Opcode::MUL:
    case Opcode::DIV:
    case Opcode::MOD:
    case Opcode::LT:
    case Opcode::GT:
    case Opcode::EQ:
    case Opcode::ISZERO:
    case Opcode::AND:
    case Opcode::OR:
    case Opcode::NOT:
    case Opcode::SLOAD:
    case Opcode::BALANCE:
    case Opcode::CALLER:
    case Opcode::ORIGIN:
    case Opcode::CALLVALUE:
    case Opcode::CALLDATALOAD:
    case Opcode::HASH:
    case Opcode::GASLEFT:
        return 1;
    case Opcode::CALL:
        return static_cast<int>(ins.b) + 1;
    default:
        return 0;
    }
}

class Interpreter
{
public:
    Interpreter(WorldState& state, const TransactionMsg& tx, ExecutionTrace& trace, std::uint64_t gas)
      : st_{state}, tx_{tx}, tr_{trace}, gas_left_{gas}
    {}

    std::uint64_t gas_left() const noexcept { return gas_left_; }
    std::size_t journal_mark() const noexcept { return journal_.size(); }
    std::vector<TransferRecord>& transfers() noexcept { return transfers_; }

    void rollback(std::size_t mark)
    {
        while (journal_.size() > mark)
        {
            const auto& e = journal_.back();
            if (e.is_balance)
                st_.set_balance(e.address, e.old);
            else
                st_.set_storage(e.address, e.slot, e.old);
            journal_.pop_back();
        }
    }

    bool move_ether(const Address& from, const Address& to, const Word& amount)
    {
        const Word fb = st_.balance(from);
        if (fb < amount)
            return false;
        if (amount == 0 || from == to)
            return true;
        set_balance(from, fb - amount);
        set_balance(to, st_.balance(to) + amount);
        return true;
    }

    FrameResult run_frame(const Address& addr, const Address& caller, Selector selector, std::vector<Word> args,
        const Word& value, std::uint32_t depth, std::optional<std::uint32_t> parent,
        std::optional<std::uint32_t> call_step)
    {
        const Contract* c = st_.contract(addr);
        const auto frame_id = static_cast<std::uint32_t>(tr_.calls.size());
        tr_.calls.push_back(CallFrame{frame_id, parent, call_step, addr, caller, selector, depth, false});

        const auto mark = journal_.size();
        const auto transfer_mark = transfers_.size();
        FrameResult res = execute(*c, frame_id, caller, selector, args, value, depth);
        if (!res.ok)
        {
            rollback(mark);
            transfers_.resize(transfer_mark);
            tr_.calls[frame_id].reverted = true;
            res.ret.clear();
        }
        return res;
    }

private:
    void set_balance(const Address& a, const Word& v)
    {
        journal_.push_back({true, a, 0, st_.balance(a)});
        st_.set_balance(a, v);
    }

    void set_storage(const Address& a, const Word& slot, const Word& v)
    {
        journal_.push_back({false, a, slot, st_.storage(a, slot)});
        st_.set_storage(a, slot, v);
    }

    void charge(std::uint64_t cost)
    {
        if (cost > gas_left_)
            throw OutOfGasAbort{};
        gas_left_ -= cost;
    }

    SharedAccess read_access(const SharedKey& k) const { return {k, written_.count(k) == 0}; }

    void note_writes(const StepRecord& s)
    {
        for (const auto& k : step_writes(s))
            written_.insert(k);
    }

    FrameResult execute(const Contract& c, std::uint32_t frame_id, const Address& caller, Selector selector,
        const std::vector<Word>& args, const Word& value, std::uint32_t depth)
    {
        std::uint32_t pc = 0;
        if (!c.functions.empty())
        {
            const auto it = c.functions.find(selector);
            if (it == c.functions.end() || it->second.visibility != Visibility::Public)
                return {};
            pc = it->second.entry;
        }

        std::vector<Word> stack;
        while (pc < c.code.size())
        {
            const auto& ins = c.code[pc];
            int npop = pop_count(ins);
            if (ins.op == Opcode::TTRANSFER)
            {
                // tag, token, [id], from, to, amount
                if (stack.empty())
                    return {};
                const auto std_tag = token_standard_from_tag(stack.back());
                npop = (std_tag && has_token_id(*std_tag)) ? 6 : 5;
            }
            if (ins.op == Opcode::DUP && ins.a == 0)
                return {};
            if (ins.op == Opcode::SWAP && ins.a == 0)
                return {};
            if (static_cast<std::size_t>(npop) > stack.size())
                return {};
            const int npush = push_count(ins);
            if (stack.size() - static_cast<std::size_t>(npop) + static_cast<std::size_t>(npush) > kMaxStack)
                return {};

            const auto cost = gas_cost(ins.op);
            charge(cost);

            const auto step_index = static_cast<std::uint32_t>(tr_.steps.size());
            StepRecord step;
            step.index = step_index;
            step.location = {c.address, pc};
            step.instr = ins;
            step.gas_cost = cost;
            step.frame = frame_id;

            auto pop = [&]() {
                Word w = stack.back();
                stack.pop_back();
                step.stack_in.push_back(w);
                return w;
            };
            auto push = [&](const Word& w) {
                stack.push_back(w);
                step.stack_out.push_back(w);
            };

            bool fail = false;
            bool halt = false;
            std::vector<Word> ret;
            std::uint32_t next_pc = pc + 1;

            switch (ins.op)
            {
            case Opcode::STOP:
                halt = true;
                break;
            case Opcode::PUSH:
                push(ins.value);
                break;
            case Opcode::POP:
                pop();
                break;
            case Opcode::DUP:
            {
                const Word w = stack[stack.size() - ins.a];
                push(w);
                break;
            }
            case Opcode::SWAP:
                std::swap(stack[stack.size() - 1], stack[stack.size() - 1 - ins.a]);
                break;
            case Opcode::ADD:
            {
                const Word a = pop();
                const Word b = pop();
                push(a + b);
                break;
            }
            case Opcode::SUB:
            {
                const Word a = pop();
                const Word b = pop();
                push(a - b);
                break;
            }
            case Opcode::MUL:
            {
                const Word a = pop();
                const Word b = pop();
                push(a * b);
                break;
            }
            case Opcode::DIV:
            {
                const Word a = pop();
                const Word b = pop();
                push(b == 0 ? Word{0} : Word{a / b});
                break;
            }
            case Opcode::MOD:
            {
                const Word a = pop();
                const Word b = pop();
                push(b == 0 ? Word{0} : Word{a % b});
                break;
            }
            case Opcode::LT:
            {
                const Word a = pop();
                const Word b = pop();
                push(a < b ? 1 : 0);
                break;
            }
            case Opcode::GT:
            {
                const Word a = pop();
                const Word b = pop();
                push(a > b ? 1 : 0);
                break;
            }
            case Opcode::EQ:
            {
                const Word a = pop();
                const Word b = pop();
                push(a == b ? 1 : 0);
                break;
            }
            case Opcode::ISZERO:
                push(pop() == 0 ? 1 : 0);
                break;
            case Opcode::AND:
            {
                const Word a = pop();
                const Word b = pop();
                push(a & b);
                break;
            }
            case Opcode::OR:
            {
                const Word a = pop();
                const Word b = pop();
                push(a | b);
                break;
            }
            case Opcode::NOT:
                push(~pop());
                break;
            case Opcode::JUMP:
            {
                const Word dest = pop();
                if (dest >= c.code.size())
                    fail = true;
                else
                    next_pc = static_cast<std::uint32_t>(dest);
                break;
            }
            case Opcode::JUMPI:
            {
                const Word dest = pop();
                const Word cond = pop();
                step.branch_taken = cond != 0;
                if (cond != 0)
                {
                    if (dest >= c.code.size())
                        fail = true;
                    else
                        next_pc = static_cast<std::uint32_t>(dest);
                }
                break;
            }
            case Opcode::SLOAD:
            {
                const Word key = pop();
                step.shared_read = read_access(SharedKey::storage(c.address, key));
                push(st_.storage(c.address, key));
                break;
            }
            case Opcode::SSTORE:
            {
                const Word key = pop();
                const Word v = pop();
                step.shared_write = SharedAccess{SharedKey::storage(c.address, key), false};
                set_storage(c.address, key, v);
                break;
            }
            case Opcode::BALANCE:
            {
                const auto a = Address::from_word(pop());
                step.shared_read = read_access(SharedKey::balance(a));
                push(st_.balance(a));
                break;
            }
            case Opcode::CALLER:
                push(caller.to_word());
                break;
            case Opcode::ORIGIN:
                push(tx_.sender.to_word());
                break;
            case Opcode::CALLVALUE:
                push(value);
                break;
            case Opcode::CALLDATALOAD:
            {
                const Word i = pop();
                push(i < args.size() ? args[static_cast<std::size_t>(i)] : Word{0});
                break;
            }
            case Opcode::TRANSFER:
            {
                const auto to = Address::from_word(pop());
                const Word amount = pop();
                step.shared_read = read_access(SharedKey::balance(c.address));
                if (!move_ether(c.address, to, amount))
                    fail = true;
                else if (amount != 0)
                    step.transfer = TransferRecord{AssetKey::ether(), c.address, to, amount, step.location, step_index};
                break;
            }
            case Opcode::TTRANSFER:
            {
                const auto std_tag = token_standard_from_tag(pop());
                const auto token = Address::from_word(pop());
                std::optional<Word> id;
                if (std_tag && has_token_id(*std_tag))
                    id = pop();
                const auto from = Address::from_word(pop());
                const auto to = Address::from_word(pop());
                const Word amount = pop();
                if (!std_tag)
                {
                    fail = true;
                    break;
                }
                const Word ledger_id = id.value_or(0);
                const Word from_slot = token_ledger_slot(ledger_id, from);
                step.shared_read = read_access(SharedKey::storage(token, from_slot));
                const Word fb = st_.storage(token, from_slot);
                if (fb < amount)
                {
                    fail = true;
                    break;
                }
                if (amount == 0)
                    break;
                if (from != to)
                {
                    const Word to_slot = token_ledger_slot(ledger_id, to);
                    set_storage(token, from_slot, fb - amount);
                    set_storage(token, to_slot, st_.storage(token, to_slot) + amount);
                }
                step.transfer =
                    TransferRecord{AssetKey::token(*std_tag, token, id), from, to, amount, step.location, step_index};
                break;
            }
            case Opcode::CALL:
            {
                const auto target = Address::from_word(pop());
                const Word call_value = pop();
                const auto sel_word = pop();
                std::vector<Word> call_args;
                for (std::uint32_t i = 0; i < ins.a; ++i)
                    call_args.push_back(pop());
                const auto call_sel = static_cast<Selector>(sel_word & 0xffffffffu);
                step.call_edge = CallEdge{target, call_sel, arg_digest(call_args), std::nullopt};
                tr_.steps.push_back(step);
                note_writes(step);

                const auto mark = journal_.size();
                const auto transfer_mark = transfers_.size();
                FrameResult callee;
                if (depth + 1 <= kMaxCallDepth && move_ether(c.address, target, call_value))
                {
                    if (call_value != 0)
                    {
                        tr_.steps[step_index].transfer = TransferRecord{
                            AssetKey::ether(), c.address, target, call_value, step.location, step_index};
                        note_writes(tr_.steps[step_index]);
                        transfers_.push_back(*tr_.steps[step_index].transfer);
                    }
                    if (st_.contract(target) != nullptr)
                    {
                        tr_.steps[step_index].call_edge->frame = static_cast<std::uint32_t>(tr_.calls.size());
                        callee = run_frame(target, c.address, call_sel, call_args, call_value, depth + 1, frame_id,
                            step_index);
                    }
                    else
                    {
                        callee.ok = true;
                    }
                }
                if (!callee.ok)
                {
                    rollback(mark);
                    transfers_.resize(transfer_mark);
                    callee.ret.clear();
                }
                auto& rec = tr_.steps[step_index];
                for (std::uint32_t k = ins.b; k-- > 0;)
                {
                    const Word w = k < callee.ret.size() ? callee.ret[k] : Word{0};
                    stack.push_back(w);
                    rec.stack_out.push_back(w);
                }
                stack.push_back(callee.ok ? 1 : 0);
                rec.stack_out.push_back(callee.ok ? 1 : 0);
                pc = next_pc;
                continue;
            }
            case Opcode::RETURN:
                for (std::uint32_t i = 0; i < ins.a; ++i)
                    ret.push_back(pop());
                halt = true;
                break;
            case Opcode::REVERT:
                fail = true;
                break;
            case Opcode::HASH:
            {
                std::vector<Word> words;
                for (std::uint32_t i = 0; i < ins.a; ++i)
                    words.push_back(pop());
                push(hash_words(words));
                break;
            }
            case Opcode::GASLEFT:
                push(gas_left_);
                break;
            case Opcode::LOG:
                for (std::uint32_t i = 0; i < ins.a; ++i)
                    pop();
                break;
            }

            if (step.transfer)
                transfers_.push_back(*step.transfer);
            note_writes(step);
            tr_.steps.push_back(std::move(step));
            if (fail)
                return {};
            if (halt)
                return {true, std::move(ret)};
            pc = next_pc;
        }
        return {true, {}};
    }

    static Digest arg_digest(const std::vector<Word>& args)
    {
        std::vector<std::uint8_t> buf;
        for (const auto& w : args)
        {
            const auto b = word_bytes(w);
            buf.insert(buf.end(), b.begin(), b.end());
        }
        return sha256(buf);
    }

    WorldState& st_;
    const TransactionMsg& tx_;
    ExecutionTrace& tr_;
    std::uint64_t gas_left_;
    std::vector<JournalEntry> journal_;
    std::vector<TransferRecord> transfers_;
    KeySet written_;
};
}  // namespace

std::pair<WorldState, ExecutionTrace> execute_transaction(const WorldState& state, const TransactionMsg& tx)
{
    ExecutionTrace trace;
    trace.tx = tx.id;
    trace.sender = tx.sender;
    trace.target = tx.target;

    const Word max_fee = Word{tx.gas_limit} * tx.gas_price;
    if (tx.nonce != state.nonce(tx.sender) || tx.gas_limit < kIntrinsicGas || tx.gas_price == 0 ||
        state.balance(tx.sender) < tx.value + max_fee)
    {
        trace.status = TxStatus::ProtocolViolation;
        return {state, std::move(trace)};
    }

    WorldState st = state;
    st.set_nonce(tx.sender, tx.nonce + 1);
    // Reserve the maximum fee up front; the unused part is returned at the end.
    st.set_balance(tx.sender, st.balance(tx.sender) - max_fee);

    Interpreter vm{st, tx, trace, tx.gas_limit - kIntrinsicGas};
    bool ok = true;
    bool oog = false;
    try
    {
        vm.move_ether(tx.sender, tx.target, tx.value);
        const Contract* c = st.contract(tx.target);
        std::uint32_t entry = 0;
        if (c)
        {
            const auto it = c->functions.find(tx.selector);
            if (it != c->functions.end())
                entry = it->second.entry;
        }
        if (tx.value != 0)
            vm.transfers().push_back(
                TransferRecord{AssetKey::ether(), tx.sender, tx.target, tx.value, {tx.target, entry}, std::nullopt});
        if (c)
            ok = vm.run_frame(tx.target, tx.sender, tx.selector, tx.args, tx.value, 0, std::nullopt, std::nullopt).ok;
    }
    catch (const OutOfGasAbort&)
    {
        ok = false;
        oog = true;
    }

    if (!ok)
    {
        vm.rollback(0);
        vm.transfers().clear();
        for (auto& f : trace.calls)
        {
            if (!f.parent)
                f.reverted = true;
        }
    }

    trace.status = oog ? TxStatus::OutOfGas : (ok ? TxStatus::Success : TxStatus::Reverted);
    trace.gas_used = oog ? tx.gas_limit : tx.gas_limit - vm.gas_left();
    trace.fee = Word{trace.gas_used} * tx.gas_price;
    trace.transfers = std::move(vm.transfers());
    st.set_balance(tx.sender, st.balance(tx.sender) + (max_fee - trace.fee));
    return {std::move(st), std::move(trace)};
}

std::pair<WorldState, std::vector<ExecutionTrace>> apply_block(
    const WorldState& state, const std::vector<TransactionMsg>& txs)
{
    WorldState st = state;
    std::vector<ExecutionTrace> traces;
    traces.reserve(txs.size());
    for (const auto& tx : txs)
    {
        auto [next, trace] = execute_transaction(st, tx);
        st = std::move(next);
        traces.push_back(std::move(trace));
    }
    return {std::move(st), std::move(traces)};
}

}  // namespace frforge::minivm
