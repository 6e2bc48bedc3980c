// frforge: front-running attack mining and vulnerability localization
// Copyright 2026 The frforge Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "frforge/asset_key.hpp"
#include "frforge/common.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace frforge::minivm
{
enum class Opcode : std::uint8_t
{
    STOP,
    PUSH,
    POP,
    DUP,
    SWAP,
    ADD,
    SUB,
    MUL,
    DIV,
    MOD,
    LT,
    GT,
    EQ,
    ISZERO,
    AND,
    OR,
    NOT,
    JUMP,
    JUMPI,
    SLOAD,
    SSTORE,
    BALANCE,
    CALLER,
    ORIGIN,
    CALLVALUE,
    CALLDATALOAD,
    TRANSFER,
    TTRANSFER,
    CALL,
    RETURN,
    REVERT,
    HASH,
    GASLEFT,
    LOG,
};

std::string_view opcode_name(Opcode op) noexcept;
std::optional<Opcode> opcode_from_name(std::string_view name) noexcept;

/// One decoded instruction. Immediates:
///   PUSH value; DUP/SWAP n (1-based depth); HASH/LOG/RETURN k (word count);
///   CALL nargs nret.
struct Instruction
{
    Opcode op = Opcode::STOP;
    Word value{};
    std::uint32_t a = 0;
    std::uint32_t b = 0;

    /// Assembly text without the PUSH operand, e.g. "DUP 2", "CALL 2 1", "PUSH".
    [[nodiscard]] std::string mnemonic() const;
    /// Full assembly text, e.g. "PUSH 0x2a".
    [[nodiscard]] std::string text() const;

    friend bool operator==(const Instruction&, const Instruction&) = default;
};

/// Parses the mnemonic form produced by Instruction::mnemonic() (PUSH operand absent).
Instruction parse_mnemonic(std::string_view text);

enum class Visibility : std::uint8_t
{
    Public,
    Internal,
};

struct FunctionInfo
{
    std::uint32_t entry = 0;
    Visibility visibility = Visibility::Public;
    std::string name;

    friend bool operator==(const FunctionInfo&, const FunctionInfo&) = default;
};

struct Contract
{
    Address address{};
    std::vector<Instruction> code;
    std::map<Selector, FunctionInfo> functions;

    /// Throws std::invalid_argument when an entry lies outside the code.
    void validate() const;

    /// The function whose body contains `offset`: the one with the greatest entry <= offset.
    [[nodiscard]] std::optional<std::pair<Selector, FunctionInfo>> function_at(std::uint32_t offset) const;

    friend bool operator==(const Contract&, const Contract&) = default;
};

struct Location
{
    Address contract{};
    std::uint32_t offset = 0;

    friend auto operator<=>(const Location&, const Location&) = default;
};

/// Identifies one piece of shared world-state data.
struct SharedKey
{
    enum class Kind : std::uint8_t
    {
        Balance,
        Storage,
        Code,
    };

    Kind kind = Kind::Balance;
    Address address{};
    Word slot{};  // storage slot; zero for balance and code keys

    static SharedKey balance(const Address& a) { return {Kind::Balance, a, 0}; }
    static SharedKey storage(const Address& a, const Word& slot) { return {Kind::Storage, a, slot}; }
    static SharedKey code(const Address& a) { return {Kind::Code, a, 0}; }

    [[nodiscard]] std::string describe() const;

    friend std::strong_ordering operator<=>(const SharedKey& a, const SharedKey& b);
    friend bool operator==(const SharedKey& a, const SharedKey& b) { return (a <=> b) == 0; }
};

using KeySet = std::set<SharedKey>;

/// Storage slot of `holder`'s balance in a token contract's ledger.
Word token_ledger_slot(const Word& token_id, const Address& holder);

struct Account
{
    Word balance{};
    std::uint64_t nonce = 0;
    std::shared_ptr<const Contract> contract;
    std::map<Word, Word> storage;

    friend bool operator==(const Account& a, const Account& b);
};

/// Balances, nonces, contract code and storage. A plain value: every execution returns a new state.
class WorldState
{
public:
    [[nodiscard]] Word balance(const Address& a) const;
    [[nodiscard]] std::uint64_t nonce(const Address& a) const;
    [[nodiscard]] const Contract* contract(const Address& a) const;
    [[nodiscard]] Word storage(const Address& a, const Word& slot) const;
    [[nodiscard]] Word token_balance(const AssetKey& asset, const Address& holder) const;

    void set_balance(const Address& a, const Word& v);
    void set_nonce(const Address& a, std::uint64_t n);
    void set_contract(Contract c);
    void set_storage(const Address& a, const Word& slot, const Word& v);
    void set_token_balance(const AssetKey& asset, const Address& holder, const Word& v);

    [[nodiscard]] const std::map<Address, Account>& accounts() const noexcept { return accounts_; }
    [[nodiscard]] Word total_ether() const;

    friend bool operator==(const WorldState&, const WorldState&) = default;

private:
    Account& account(const Address& a) { return accounts_[a]; }
    // Keeps the map canonical: an account with nothing in it is the same as no account.
    void drop_if_empty(const Address& a);
    const Account* find(const Address& a) const;

    std::map<Address, Account> accounts_;
};

inline constexpr std::uint64_t kIntrinsicGas = 21;
inline constexpr std::size_t kMaxCallDepth = 64;
inline constexpr std::size_t kMaxStack = 1024;

/// Flat gas cost of an opcode (CALL excludes the callee's own steps).
std::uint64_t gas_cost(Opcode op) noexcept;

struct TransactionMsg
{
    Address sender{};
    std::uint64_t nonce = 0;
    Address target{};
    Selector selector = 0;
    std::vector<Word> args;
    Word value{};
    std::uint64_t gas_limit = 0;
    std::uint64_t gas_price = 1;
    Digest id{};

    /// Content hash over every other field.
    [[nodiscard]] Digest compute_id() const;
    /// Sets `id` from the other fields and returns *this.
    TransactionMsg& seal();

    friend bool operator==(const TransactionMsg&, const TransactionMsg&) = default;
};

enum class TxStatus : std::uint8_t
{
    Success,
    Reverted,
    OutOfGas,
    ProtocolViolation,
};

std::string_view status_name(TxStatus s) noexcept;
TxStatus status_from_name(std::string_view name);

struct TransferRecord
{
    AssetKey asset;
    Address from{};
    Address to{};
    Word amount{};
    Location location;
    /// Index of the emitting step; absent for the transaction's own value transfer.
    std::optional<std::uint32_t> step;

    friend bool operator==(const TransferRecord&, const TransferRecord&) = default;
};

struct SharedAccess
{
    SharedKey key;
    bool def_clear = false;  // meaningful for reads only

    friend bool operator==(const SharedAccess&, const SharedAccess&) = default;
};

struct CallEdge
{
    Address callee{};
    Selector selector = 0;
    Digest args_digest{};
    /// Frame id of the callee when it ran code.
    std::optional<std::uint32_t> frame;

    friend bool operator==(const CallEdge&, const CallEdge&) = default;
};

struct StepRecord
{
    std::uint32_t index = 0;
    Location location;
    Instruction instr;
    std::vector<Word> stack_in;   // popped, top first
    std::vector<Word> stack_out;  // pushed, in push order
    std::optional<SharedAccess> shared_read;
    std::optional<SharedAccess> shared_write;
    std::optional<bool> branch_taken;
    std::optional<CallEdge> call_edge;
    std::optional<TransferRecord> transfer;
    std::uint64_t gas_cost = 0;
    std::uint32_t frame = 0;

    friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

/// One activation in the call tree. Frame 0 is the transaction's top-level call.
struct CallFrame
{
    std::uint32_t id = 0;
    std::optional<std::uint32_t> parent;
    std::optional<std::uint32_t> call_step;
    Address contract{};
    Address caller{};
    Selector selector = 0;
    std::uint32_t depth = 0;
    bool reverted = false;

    friend bool operator==(const CallFrame&, const CallFrame&) = default;
};

struct ExecutionTrace
{
    Digest tx{};
    Address sender{};
    Address target{};
    std::vector<StepRecord> steps;
    TxStatus status = TxStatus::Success;
    std::uint64_t gas_used = 0;
    Word fee{};
    std::vector<TransferRecord> transfers;  // committed only
    std::vector<CallFrame> calls;

    /// Per step: false when the step ran inside a frame that reverted, or the transaction failed.
    [[nodiscard]] std::vector<bool> committed_mask() const;

    friend bool operator==(const ExecutionTrace&, const ExecutionTrace&) = default;
};

/// Keys a step writes: its shared_write plus the balance or ledger keys of its transfer.
std::vector<SharedKey> step_writes(const StepRecord& step);

/// Never throws for well-formed input: failures are reported through trace.status.
std::pair<WorldState, ExecutionTrace> execute_transaction(const WorldState& state, const TransactionMsg& tx);

std::pair<WorldState, std::vector<ExecutionTrace>> apply_block(
    const WorldState& state, const std::vector<TransactionMsg>& txs);

struct AccessSets
{
    KeySet def_clear_reads;
    KeySet writes;
};

/// Step-level shared accesses. Throws std::invalid_argument for ProtocolViolation traces.
AccessSets shared_access_sets(const ExecutionTrace& trace);

/// Writes made by the transaction envelope rather than by any step: the fee debit on the
/// sender and the value transfer to the target.
KeySet envelope_writes(const ExecutionTrace& trace);

// Assembly.

struct AssembledCode
{
    std::vector<Instruction> code;
    std::map<std::string, std::uint32_t> labels;
};

/// One instruction per line; `;` starts a comment; `name:` defines a label;
/// `PUSH @name` pushes a label's offset.
AssembledCode assemble(std::string_view source);

/// One line per instruction with numeric operands; reassembles to the same code.
std::string disassemble(const std::vector<Instruction>& code);

}  // namespace frforge::minivm
