// frforge: front-running attack mining and vulnerability localization
// Copyright 2026 The frforge Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "frforge/chain.hpp"
#include "frforge/minivm.hpp"

#include <vector>

// Hand-built contracts and histories with known attacks.
namespace frforge::fixtures
{
namespace addr
{
inline const Address relayer = Address::from_u64(0x1001);
inline const Address relay_attacker = Address::from_u64(0x1002);
inline const Address relay_user = Address::from_u64(0x1003);
inline const Address swap_victim = Address::from_u64(0x2001);
inline const Address swap_attacker = Address::from_u64(0x2002);
inline const Address bystander = Address::from_u64(0x3001);
inline const Address pot_victim = Address::from_u64(0x4001);
inline const Address pot_attacker = Address::from_u64(0x4002);

inline const Address transfer_manager = Address::from_u64(0xc001);
inline const Address relay_token = Address::from_u64(0xc002);
inline const Address swap = Address::from_u64(0xc101);
inline const Address pair = Address::from_u64(0xc102);
inline const Address token0 = Address::from_u64(0xc103);
inline const Address token1 = Address::from_u64(0xc104);
inline const Address pot = Address::from_u64(0xc201);
inline const Address bot = Address::from_u64(0xc202);
inline const Address counter = Address::from_u64(0xc301);
}  // namespace addr

inline constexpr std::uint64_t kSwapFee = 10;
inline constexpr std::uint64_t kRelayFee = 50;
inline constexpr std::uint64_t kPotReward = 1000;

minivm::Contract transfer_manager();
minivm::Contract swap();
minivm::Contract pair();
minivm::Contract pot();
minivm::Contract bot();
minivm::Contract counter();

/// Block of [attacker copy, relayer] replaying one signed operation.
chain::History relay_guard_history();
/// Block of [attacker swap, victim swap, attacker swap back].
chain::History mini_swap_history();
/// Block of [attacker poke via bot, victim claim with a tight gas limit, attacker claim].
chain::History griefing_history();
/// RelayGuard, a counter bump, MiniSwap, another counter bump: four blocks.
chain::History combined_history();

/// The `unique` branch of relayOperation.
minivm::Location uniqueness_branch();
/// The token-out transfer of doSwap.
minivm::Location token_out_transfer();
/// Every instruction of the swap fee payment.
std::vector<minivm::Location> swap_fee_locations();
/// Every instruction of the logSwap call site and the logSwap body.
std::vector<minivm::Location> swap_log_locations();

}  // namespace frforge::fixtures
