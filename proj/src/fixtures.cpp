// frforge: front-running attack mining and vulnerability localization
// Copyright 2026 The frforge Authors.
// SPDX-License-Identifier: Apache-2.0

#include "frforge/fixtures.hpp"

#include <map>
#include <string>
#include <utility>

namespace frforge::fixtures
{
namespace
{
using minivm::Contract;
using minivm::FunctionInfo;
using minivm::Location;
using minivm::TransactionMsg;
using minivm::Visibility;
using minivm::WorldState;

constexpr std::uint64_t kGas = 100'000;
const Word kFunds = Word{1'000'000'000};

std::string fill(std::string src, const std::map<std::string, std::string>& vars)
{
    for (const auto& [k, v] : vars)
    {
        const std::string key = "{" + k + "}";
        for (auto pos = src.find(key); pos != std::string::npos; pos = src.find(key, pos + v.size()))
            src.replace(pos, key.size(), v);
    }
    return src;
}

std::map<std::string, std::string> common_vars()
{
    return {
        {"SWAP", addr::swap.hex()},
        {"PAIR", addr::pair.hex()},
        {"TOKEN0", addr::token0.hex()},
        {"TOKEN1", addr::token1.hex()},
        {"POT", addr::pot.hex()},
        {"SEL_GET_RESERVES", to_hex(selector_of("getReserves()"))},
        {"SEL_DO_SWAP", to_hex(selector_of("doSwap(uint256,uint256)"))},
        {"SEL_DO_SWAP_BACK", to_hex(selector_of("doSwapBack(uint256,uint256)"))},
        {"SEL_POKE", to_hex(selector_of("poke()"))},
        {"SWAP_FEE", std::to_string(kSwapFee)},
        {"RELAY_FEE", std::to_string(kRelayFee)},
        {"REWARD", std::to_string(kPotReward)},
    };
}

struct Fn
{
    const char* signature;
    const char* name;
    const char* label;
    Visibility visibility;
};

struct Built
{
    Contract contract;
    std::map<std::string, std::uint32_t> labels;
};

Built build(const Address& address, const char* source, std::initializer_list<Fn> fns)
{
    auto assembled = minivm::assemble(fill(source, common_vars()));
    Built b;
    b.contract.address = address;
    b.contract.code = std::move(assembled.code);
    for (const auto& f : fns)
        b.contract.functions[selector_of(f.signature)] = FunctionInfo{assembled.labels.at(f.label), f.visibility, f.name};
    b.labels = std::move(assembled.labels);
    b.contract.validate();
    return b;
}

constexpr const char* kTransferManager = R"(
relayOperation:            ; (token, user, op, sig)
    PUSH 2
    CALLDATALOAD
    PUSH 1
    CALLDATALOAD
    HASH 2                 ; expected signature over (user, op)
    PUSH 3
    CALLDATALOAD
    EQ
    PUSH @sig_ok
    JUMPI
    REVERT
sig_ok:
    PUSH 3
    CALLDATALOAD
    PUSH 2
    CALLDATALOAD
    HASH 2                 ; request key over (op, sig)
    DUP 1
    SLOAD
    ISZERO
    PUSH @unique
unique_check:
    JUMPI
    REVERT                 ; duplicate request
unique:
    PUSH 1
    SWAP 1
    SSTORE                 ; used[key] = 1
    PUSH 2
    CALLDATALOAD
    PUSH 0
    SSTORE                 ; last op
    PUSH {RELAY_FEE}
    CALLER
    PUSH 1
    CALLDATALOAD
    PUSH 0
    CALLDATALOAD
    PUSH 20
    TTRANSFER              ; relay fee from user to relayer
    STOP
)";

constexpr const char* kSwap = R"(
swap:                      ; (amountIn, minOut) token0 -> token1
fee:
    PUSH {SWAP_FEE}
    PUSH {SWAP}
    CALLER
    PUSH {TOKEN0}
    PUSH 20
    TTRANSFER
fee_end:
    PUSH {SEL_GET_RESERVES}
    PUSH 0
    PUSH {PAIR}
    CALL 0 2               ; r1 r0 ok
    ISZERO
    PUSH @fail
    JUMPI
    PUSH 0
    CALLDATALOAD
    DUP 2
    ADD                    ; r0 + amountIn
    DUP 3
    DUP 3
    MUL                    ; r0 * r1
    DIV
    DUP 3
    SUB                    ; amountOut = r1 - r0*r1/(r0 + amountIn)
    PUSH 1
    CALLDATALOAD
    DUP 2
    LT
    PUSH @fail
    JUMPI                  ; slippage
log_call:
    PUSH @after_log
    PUSH 0
    CALLDATALOAD
    DUP 3
    PUSH @logSwap
    JUMP
after_log:
    PUSH 0
    CALLDATALOAD
    PUSH {SEL_DO_SWAP}
    PUSH 0
    PUSH {PAIR}
    CALL 2 0
    ISZERO
    PUSH @fail
    JUMPI
    STOP

swapBack:                  ; (amountIn, minOut) token1 -> token0
fee_back:
    PUSH {SWAP_FEE}
    PUSH {SWAP}
    CALLER
    PUSH {TOKEN0}
    PUSH 20
    TTRANSFER
fee_back_end:
    PUSH {SEL_GET_RESERVES}
    PUSH 0
    PUSH {PAIR}
    CALL 0 2
    ISZERO
    PUSH @fail
    JUMPI
    SWAP 1                 ; r0 r1
    PUSH 0
    CALLDATALOAD
    DUP 2
    ADD                    ; r1 + amountIn
    DUP 3
    DUP 3
    MUL
    DIV
    DUP 3
    SUB                    ; amountOut = r0 - r0*r1/(r1 + amountIn)
    PUSH 1
    CALLDATALOAD
    DUP 2
    LT
    PUSH @fail
    JUMPI
    PUSH 0
    CALLDATALOAD
    PUSH {SEL_DO_SWAP_BACK}
    PUSH 0
    PUSH {PAIR}
    CALL 2 0
    ISZERO
    PUSH @fail
    JUMPI
    STOP
fail:
    REVERT

logSwap:                   ; (ret, amountIn, amountOut)
    PUSH 0x5357
    LOG 3
    JUMP
)";

constexpr const char* kPair = R"(
getReserves:
    PUSH 1
    SLOAD
    PUSH 0
    SLOAD
    RETURN 2

doSwap:                    ; (amount0In, amount1Out)
    PUSH 0
    CALLDATALOAD
    PUSH 0
    SLOAD
    ADD
    PUSH 0
    SSTORE
    PUSH 1
    CALLDATALOAD
    PUSH 1
    SLOAD
    SUB
    PUSH 1
    SSTORE
    PUSH 0
    CALLDATALOAD
    PUSH {PAIR}
    ORIGIN
    PUSH {TOKEN0}
    PUSH 20
    TTRANSFER              ; token in
    PUSH 1
    CALLDATALOAD
    ORIGIN
    PUSH {PAIR}
    PUSH {TOKEN1}
    PUSH 20
token_out:
    TTRANSFER              ; token out
    STOP

doSwapBack:                ; (amount1In, amount0Out)
    PUSH 0
    CALLDATALOAD
    PUSH 1
    SLOAD
    ADD
    PUSH 1
    SSTORE
    PUSH 1
    CALLDATALOAD
    PUSH 0
    SLOAD
    SUB
    PUSH 0
    SSTORE
    PUSH 0
    CALLDATALOAD
    PUSH {PAIR}
    ORIGIN
    PUSH {TOKEN1}
    PUSH 20
    TTRANSFER
    PUSH 1
    CALLDATALOAD
    ORIGIN
    PUSH {PAIR}
    PUSH {TOKEN0}
    PUSH 20
    TTRANSFER
    STOP
)";

constexpr const char* kPot = R"(
poke:
    PUSH 50
    PUSH 0
    SLOAD
    ADD
    PUSH 0
    SSTORE
    STOP

claim:
    PUSH 0
    SLOAD                  ; pending rounds
loop:
    DUP 1
    ISZERO
    PUSH @done
    JUMPI
    PUSH 1
    SWAP 1
    SUB
    PUSH @loop
    JUMP
done:
    POP
    PUSH 1
    SLOAD
    PUSH @fail
    JUMPI                  ; already claimed
    PUSH 1
    PUSH 1
    SSTORE
    PUSH {REWARD}
    CALLER
    TRANSFER
    STOP
fail:
    REVERT
)";

constexpr const char* kBot = R"(
    PUSH {SEL_POKE}
    PUSH 0
    PUSH {POT}
    CALL 0 0
    POP
    STOP
)";

constexpr const char* kCounter = R"(
inc:
    PUSH 1
    PUSH 0
    SLOAD
    ADD
    PUSH 0
    SSTORE
    STOP
)";

Built built_transfer_manager()
{
    return build(addr::transfer_manager, kTransferManager,
        {{"relayOperation(address,address,uint256,bytes32)", "relayOperation", "relayOperation", Visibility::Public}});
}

Built built_swap()
{
    return build(addr::swap, kSwap,
        {{"swap(uint256,uint256)", "swap", "swap", Visibility::Public},
            {"swapBack(uint256,uint256)", "swapBack", "swapBack", Visibility::Public},
            {"logSwap(uint256,uint256)", "logSwap", "logSwap", Visibility::Internal}});
}

Built built_pair()
{
    return build(addr::pair, kPair,
        {{"getReserves()", "getReserves", "getReserves", Visibility::Public},
            {"doSwap(uint256,uint256)", "doSwap", "doSwap", Visibility::Public},
            {"doSwapBack(uint256,uint256)", "doSwapBack", "doSwapBack", Visibility::Public}});
}

TransactionMsg make_tx(const Address& sender, std::uint64_t nonce, const Address& target, std::string_view fn,
    std::vector<Word> args, std::uint64_t gas_limit = kGas, std::uint64_t gas_price = 1)
{
    TransactionMsg tx;
    tx.sender = sender;
    tx.nonce = nonce;
    tx.target = target;
    tx.selector = fn.empty() ? 0 : selector_of(fn);
    tx.args = std::move(args);
    tx.gas_limit = gas_limit;
    tx.gas_price = gas_price;
    return tx.seal();
}

AssetKey erc20(const Address& a)
{
    return AssetKey::token(TokenStandard::ERC20, a);
}

void relay_genesis(WorldState& g)
{
    g.set_contract(transfer_manager());
    for (const auto& a : {addr::relayer, addr::relay_attacker, addr::relay_user})
        g.set_balance(a, kFunds);
    g.set_token_balance(erc20(addr::relay_token), addr::relay_user, 1000);
}

std::vector<TransactionMsg> relay_txs()
{
    const Word user = addr::relay_user.to_word();
    const Word op = 0x7e1a7;
    const std::array<Word, 2> sig_words{user, op};
    const Word sig = hash_words(sig_words);
    const std::vector<Word> args{addr::relay_token.to_word(), user, op, sig};
    const auto fn = "relayOperation(address,address,uint256,bytes32)";
    auto relayer_tx = make_tx(addr::relayer, 0, addr::transfer_manager, fn, args, kGas, 1);
    auto copy_tx = make_tx(addr::relay_attacker, 0, addr::transfer_manager, fn, args, kGas, 2);
    return {copy_tx, relayer_tx};
}

void swap_genesis(WorldState& g)
{
    g.set_contract(swap());
    g.set_contract(pair());
    for (const auto& a : {addr::swap_victim, addr::swap_attacker})
    {
        g.set_balance(a, kFunds);
        g.set_token_balance(erc20(addr::token0), a, 2000);
    }
    g.set_storage(addr::pair, 0, 10000);
    g.set_storage(addr::pair, 1, 10000);
    g.set_token_balance(erc20(addr::token0), addr::pair, 10000);
    g.set_token_balance(erc20(addr::token1), addr::pair, 10000);
}

std::vector<TransactionMsg> swap_txs()
{
    const auto swap_fn = "swap(uint256,uint256)";
    return {
        make_tx(addr::swap_attacker, 0, addr::swap, swap_fn, {1000, 910}, kGas, 3),
        make_tx(addr::swap_victim, 0, addr::swap, swap_fn, {1000, 0}, kGas, 2),
        make_tx(addr::swap_attacker, 1, addr::swap, "swapBack(uint256,uint256)", {910, 0}, kGas, 1),
    };
}

void counter_genesis(WorldState& g)
{
    g.set_contract(counter());
    g.set_balance(addr::bystander, kFunds);
}

std::vector<Location> range(const Built& b, const std::string& from, const std::string& to)
{
    std::vector<Location> out;
    const auto end = to.empty() ? static_cast<std::uint32_t>(b.contract.code.size()) : b.labels.at(to);
    for (auto i = b.labels.at(from); i < end; ++i)
        out.push_back({b.contract.address, i});
    return out;
}
}  // namespace

minivm::Contract transfer_manager()
{
    return built_transfer_manager().contract;
}

minivm::Contract swap()
{
    return built_swap().contract;
}

minivm::Contract pair()
{
    return built_pair().contract;
}

minivm::Contract pot()
{
    return build(addr::pot, kPot,
        {{"poke()", "poke", "poke", Visibility::Public}, {"claim()", "claim", "claim", Visibility::Public}})
        .contract;
}

minivm::Contract bot()
{
    return build(addr::bot, kBot, {}).contract;
}

minivm::Contract counter()
{
    return build(addr::counter, kCounter, {{"inc()", "inc", "inc", Visibility::Public}}).contract;
}

chain::History relay_guard_history()
{
    WorldState g;
    relay_genesis(g);
    return chain::History{g, {{0, relay_txs()}}};
}

chain::History mini_swap_history()
{
    WorldState g;
    swap_genesis(g);
    return chain::History{g, {{0, swap_txs()}}};
}

chain::History griefing_history()
{
    WorldState g;
    g.set_contract(pot());
    g.set_contract(bot());
    g.set_balance(addr::pot, kPotReward);
    g.set_balance(addr::pot_victim, kFunds);
    g.set_balance(addr::pot_attacker, kFunds);
    std::vector<TransactionMsg> txs{
        make_tx(addr::pot_attacker, 0, addr::bot, "", {}, kGas, 5),
        make_tx(addr::pot_victim, 0, addr::pot, "claim()", {}, 100, 2),
        make_tx(addr::pot_attacker, 1, addr::pot, "claim()", {}, 1000, 1),
    };
    return chain::History{g, {{0, std::move(txs)}}};
}

chain::History combined_history()
{
    WorldState g;
    relay_genesis(g);
    swap_genesis(g);
    counter_genesis(g);
    std::vector<chain::Block> blocks{
        {0, relay_txs()},
        {1, {make_tx(addr::bystander, 0, addr::counter, "inc()", {})}},
        {2, swap_txs()},
        {3, {make_tx(addr::bystander, 1, addr::counter, "inc()", {})}},
    };
    return chain::History{g, std::move(blocks)};
}

minivm::Location uniqueness_branch()
{
    const auto b = built_transfer_manager();
    return {b.contract.address, b.labels.at("unique_check")};
}

minivm::Location token_out_transfer()
{
    const auto b = built_pair();
    return {b.contract.address, b.labels.at("token_out")};
}

std::vector<minivm::Location> swap_fee_locations()
{
    const auto b = built_swap();
    auto out = range(b, "fee", "fee_end");
    const auto back = range(b, "fee_back", "fee_back_end");
    out.insert(out.end(), back.begin(), back.end());
    return out;
}

std::vector<minivm::Location> swap_log_locations()
{
    const auto b = built_swap();
    auto out = range(b, "log_call", "after_log");
    const auto body = range(b, "logSwap", "");
    out.insert(out.end(), body.begin(), body.end());
    return out;
}

}  // namespace frforge::fixtures
