// frforge: front-running attack mining and vulnerability localization
// Copyright 2026 The frforge Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace frforge
{
/// 256-bit machine word. Arithmetic wraps modulo 2^256.
using Word = boost::multiprecision::uint256_t;

/// Signed quantity wide enough to hold sums of word-sized deltas without overflow.
using SignedAmount = boost::multiprecision::int512_t;

using Selector = std::uint32_t;

/// SHA-256 output.
using Digest = std::array<std::uint8_t, 32>;

class FormatError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct Address
{
    std::array<std::uint8_t, 20> bytes{};

    static Address from_u64(std::uint64_t v) noexcept;
    /// Low 160 bits of the word.
    static Address from_word(const Word& w) noexcept;
    static Address from_hex(std::string_view hex);

    [[nodiscard]] Word to_word() const;
    [[nodiscard]] std::string hex() const;

    friend auto operator<=>(const Address&, const Address&) = default;
};

Digest sha256(std::span<const std::uint8_t> data);
Digest sha256(std::string_view data);

/// Big-endian 32-byte encoding.
std::array<std::uint8_t, 32> word_bytes(const Word& w);
Word word_from_bytes(std::span<const std::uint8_t, 32> b);
Word digest_word(const Digest& d);

/// The VM's opaque HASH: SHA-256 over the 32-byte big-endian encodings of the words, in order.
Word hash_words(std::span<const Word> words);

std::string to_hex(const Word& w);  // "0x" + minimal lowercase hex
std::string to_hex(const Digest& d);
std::string to_hex(Selector s);  // "0x" + 8 hex digits
std::string to_dec(const Word& w);
std::string to_dec(const SignedAmount& v);

/// Accepts "0x"-prefixed hex or plain decimal.
Word parse_word(std::string_view text);
SignedAmount parse_signed(std::string_view text);
Digest parse_digest(std::string_view hex);
Selector parse_selector(std::string_view hex);

/// Selector of a function name: first four bytes of SHA-256(name).
Selector selector_of(std::string_view signature);

}  // namespace frforge
