// frforge: front-running attack mining and vulnerability localization
// Copyright 2026 The frforge Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "frforge/common.hpp"

#include <optional>
#include <string>

namespace frforge
{
/// Token standards recognised by TTRANSFER. The numeric value is the operand tag.
enum class TokenStandard : std::uint32_t
{
    ERC20 = 20,
    ERC721 = 721,
    ERC777 = 777,
    ERC1155 = 1155,
};

std::optional<TokenStandard> token_standard_from_tag(const Word& tag) noexcept;
std::string_view standard_name(TokenStandard s) noexcept;
TokenStandard standard_from_name(std::string_view name);

/// True for standards whose balances are keyed by a token id.
constexpr bool has_token_id(TokenStandard s) noexcept
{
    return s == TokenStandard::ERC721 || s == TokenStandard::ERC1155;
}

/// Either Ether or a token balance of a given standard, contract and (for NFT-like standards) id.
struct AssetKey
{
    enum class Kind : std::uint8_t
    {
        Ether,
        Token,
    };

    Kind kind = Kind::Ether;
    TokenStandard standard = TokenStandard::ERC20;
    Address contract{};
    std::optional<Word> token_id;

    static AssetKey ether() noexcept { return {}; }

    /// Throws std::invalid_argument when token_id presence does not match the standard.
    static AssetKey token(TokenStandard standard, const Address& contract, std::optional<Word> token_id = {});

    [[nodiscard]] bool is_ether() const noexcept { return kind == Kind::Ether; }
    [[nodiscard]] std::string describe() const;

    friend std::strong_ordering operator<=>(const AssetKey& a, const AssetKey& b);
    friend bool operator==(const AssetKey& a, const AssetKey& b) { return (a <=> b) == 0; }
};

}  // namespace frforge
