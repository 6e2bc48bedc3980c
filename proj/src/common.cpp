// frforge: front-running attack mining and vulnerability localization
// Copyright 2026 The frforge Authors.
// SPDX-License-Identifier: Apache-2.0

#include "frforge/common.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>

namespace frforge
{
namespace
{
int hex_value(char c)
{
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}

std::string_view strip_0x(std::string_view s)
{
    if (s.size() >= 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X'))
        return s.substr(2);
    return s;
}

constexpr char kHexDigits[] = "0123456789abcdef";
}  // namespace

Address Address::from_u64(std::uint64_t v) noexcept
{
    Address a;
    for (int i = 19; i >= 12; --i)
    {
        a.bytes[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v & 0xff);
        v >>= 8;
    }
    return a;
}

Address Address::from_word(const Word& w) noexcept
{
    const auto b = word_bytes(w);
    Address a;
    std::copy(b.begin() + 12, b.end(), a.bytes.begin());
    return a;
}

Address Address::from_hex(std::string_view hex)
{
    const auto digits = strip_0x(hex);
    if (digits.size() != 40)
        throw FormatError("address must have 40 hex digits: " + std::string(hex));
    Address a;
    for (std::size_t i = 0; i < 20; ++i)
    {
        const int hi = hex_value(digits[2 * i]);
        const int lo = hex_value(digits[2 * i + 1]);
        if (hi < 0 || lo < 0)
            throw FormatError("invalid address: " + std::string(hex));
        a.bytes[i] = static_cast<std::uint8_t>(hi * 16 + lo);
    }
    return a;
}

Word Address::to_word() const
{
    std::array<std::uint8_t, 32> b{};
    std::copy(bytes.begin(), bytes.end(), b.begin() + 12);
    return word_from_bytes(b);
}

std::string Address::hex() const
{
    std::string out = "0x";
    out.reserve(42);
    for (const auto byte : bytes)
    {
        out.push_back(kHexDigits[byte >> 4]);
        out.push_back(kHexDigits[byte & 0xf]);
    }
    return out;
}

Digest sha256(std::span<const std::uint8_t> data)
{
    Digest out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 failed");
    return out;
}

Digest sha256(std::string_view data)
{
    return sha256(std::span{reinterpret_cast<const std::uint8_t*>(data.data()), data.size()});
}

std::array<std::uint8_t, 32> word_bytes(const Word& w)
{
    std::array<std::uint8_t, 32> out{};
    Word v = w;
    for (int i = 31; i >= 0 && v != 0; --i)
    {
        out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v & 0xff);
        v >>= 8;
    }
    return out;
}

Word word_from_bytes(std::span<const std::uint8_t, 32> b)
{
    Word w = 0;
    for (const auto byte : b)
        w = (w << 8) | byte;
    return w;
}

Word digest_word(const Digest& d)
{
    return word_from_bytes(std::span<const std::uint8_t, 32>{d});
}

Word hash_words(std::span<const Word> words)
{
    std::vector<std::uint8_t> buf;
    buf.reserve(words.size() * 32);
    for (const auto& w : words)
    {
        const auto b = word_bytes(w);
        buf.insert(buf.end(), b.begin(), b.end());
    }
    return digest_word(sha256(buf));
}

std::string to_hex(const Word& w)
{
    if (w == 0)
        return "0x0";
    std::string digits;
    Word v = w;
    while (v != 0)
    {
        digits.push_back(kHexDigits[static_cast<unsigned>(v & 0xf)]);
        v >>= 4;
    }
    std::reverse(digits.begin(), digits.end());
    return "0x" + digits;
}

std::string to_hex(const Digest& d)
{
    std::string out = "0x";
    for (const auto byte : d)
    {
        out.push_back(kHexDigits[byte >> 4]);
        out.push_back(kHexDigits[byte & 0xf]);
    }
    return out;
}

std::string to_hex(Selector s)
{
    std::string out = "0x";
    for (int shift = 28; shift >= 0; shift -= 4)
        out.push_back(kHexDigits[(s >> shift) & 0xf]);
    return out;
}

std::string to_dec(const Word& w)
{
    return w.str();
}

std::string to_dec(const SignedAmount& v)
{
    return v.str();
}

Word parse_word(std::string_view text)
{
    if (text.empty())
        throw FormatError("empty number");
    Word w = 0;
    if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X'))
    {
        const auto digits = text.substr(2);
        if (digits.empty() || digits.size() > 64)
            throw FormatError("invalid hex word: " + std::string(text));
        for (const char c : digits)
        {
            const int v = hex_value(c);
            if (v < 0)
                throw FormatError("invalid hex word: " + std::string(text));
            w = (w << 4) | static_cast<unsigned>(v);
        }
        return w;
    }
    const Word max = std::numeric_limits<Word>::max();
    for (const char c : text)
    {
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw FormatError("invalid decimal number: " + std::string(text));
        const unsigned d = static_cast<unsigned>(c - '0');
        if (w > (max - d) / 10)
            throw FormatError("number exceeds 256 bits: " + std::string(text));
        w = w * 10 + d;
    }
    return w;
}

SignedAmount parse_signed(std::string_view text)
{
    if (!text.empty() && text[0] == '-')
        return -SignedAmount(parse_word(text.substr(1)));
    return SignedAmount(parse_word(text));
}

Digest parse_digest(std::string_view hex)
{
    const auto digits = strip_0x(hex);
    if (digits.size() != 64)
        throw FormatError("digest must have 64 hex digits: " + std::string(hex));
    Digest d{};
    for (std::size_t i = 0; i < 32; ++i)
    {
        const int hi = hex_value(digits[2 * i]);
        const int lo = hex_value(digits[2 * i + 1]);
        if (hi < 0 || lo < 0)
            throw FormatError("invalid digest: " + std::string(hex));
        d[i] = static_cast<std::uint8_t>(hi * 16 + lo);
    }
    return d;
}

Selector parse_selector(std::string_view hex)
{
    const auto w = parse_word(hex);
    if (w > 0xffffffffu)
        throw FormatError("selector exceeds 4 bytes: " + std::string(hex));
    return static_cast<Selector>(w);
}

Selector selector_of(std::string_view signature)
{
    const auto d = sha256(signature);
    return (Selector{d[0]} << 24) | (Selector{d[1]} << 16) | (Selector{d[2]} << 8) | Selector{d[3]};
}

}  // namespace frforge
