// frforge: front-running attack mining and vulnerability localization
// Copyright 2026 The frforge Authors.
// SPDX-License-Identifier: Apache-2.0

#include "frforge/asset_key.hpp"

namespace frforge
{
std::optional<TokenStandard> token_standard_from_tag(const Word& tag) noexcept
{
    if (tag == 20)
        return TokenStandard::ERC20;
    if (tag == 721)
        return TokenStandard::ERC721;
    if (tag == 777)
        return TokenStandard::ERC777;
    if (tag == 1155)
        return TokenStandard::ERC1155;
    return std::nullopt;
}

std::string_view standard_name(TokenStandard s) noexcept
{
    switch (s)
    {
    case TokenStandard::ERC20:
        return "ERC20";
    case TokenStandard::ERC721:
        return "ERC721";
    case TokenStandard::ERC777:
        return "ERC777";
    case TokenStandard::ERC1155:
        return "ERC1155";
    }
    return "?";
}

TokenStandard standard_from_name(std::string_view name)
{
    for (const auto s :
        {TokenStandard::ERC20, TokenStandard::ERC721, TokenStandard::ERC777, TokenStandard::ERC1155})
    {
        if (standard_name(s) == name)
            return s;
    }
    throw FormatError("unknown token standard: " + std::string(name));
}

AssetKey AssetKey::token(TokenStandard standard, const Address& contract, std::optional<Word> token_id)
{
    if (has_token_id(standard) != token_id.has_value())
        throw std::invalid_argument("token id presence does not match " + std::string(standard_name(standard)));
    AssetKey k;
    k.kind = Kind::Token;
    k.standard = standard;
    k.contract = contract;
    k.token_id = std::move(token_id);
    return k;
}

std::string AssetKey::describe() const
{
    if (is_ether())
        return "Ether";
    std::string out{standard_name(standard)};
    out += ":" + contract.hex();
    if (token_id)
        out += "#" + to_hex(*token_id);
    return out;
}

std::strong_ordering operator<=>(const AssetKey& a, const AssetKey& b)
{
    if (auto c = a.kind <=> b.kind; c != 0)
        return c;
    if (a.is_ether())
        return std::strong_ordering::equal;
    if (auto c = a.standard <=> b.standard; c != 0)
        return c;
    if (auto c = a.contract <=> b.contract; c != 0)
        return c;
    if (a.token_id.has_value() != b.token_id.has_value())
        return a.token_id.has_value() ? std::strong_ordering::greater : std::strong_ordering::less;
    if (!a.token_id)
        return std::strong_ordering::equal;
    if (*a.token_id < *b.token_id)
        return std::strong_ordering::less;
    if (*a.token_id > *b.token_id)
        return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

}  // namespace frforge
