#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bsq/group.hpp"

namespace bsq {

/** Pointed expansion of a group element: the base-q digit word of r written
 *  most significant digit first, with the radix point marked on the digit of
 *  weight q^0 and the cursor marked on the digit of weight q^m.
 *
 *  digits[i] has weight q^(radix - i); both markers always sit on a digit of
 *  the word, so the span always covers position 0 and the cursor position.
 *  The canonical word is the shortest one, and the zero word carries sign '+'.
 */
struct pe_word {
    bool negative = false;
    std::vector<int> digits;
    std::size_t radix = 0;
    std::size_t cursor = 0;

    bool operator==(const pe_word&) const = default;

    std::int64_t cursor_position() const {
        return static_cast<std::int64_t>(radix) - static_cast<std::int64_t>(cursor);
    }
    std::size_t token_count() const { return digits.size() + 1; }
};

pe_word pe_encode(const group_context& ctx, const group_element& g);
group_element pe_decode(const group_context& ctx, const pe_word& w);

/** Structural validity: nonempty, digits within [0, q), indices in range. */
bool pe_valid(const group_context& ctx, const pe_word& w);
bool pe_canonical(const group_context& ctx, const pe_word& w);
pe_word pe_canonicalize(const group_context& ctx, pe_word w);

/** Text format: sign token then digit tokens msd first, decimal digit value
 *  with optional suffix 'r' (radix) and then 'c' (cursor), e.g. "+ 0c 1 1r". */
std::string pe_to_text(const pe_word& w);
pe_word pe_from_text(const group_context& ctx, const std::string& text);

/** Symbol ids for pe words as automaton input: 0 is '+', 1 is '-',
 *  2 + 4d + marker for digit d with marker in {0, r, c, rc}. */
struct pe_alphabet {
    int q;

    explicit pe_alphabet(int q_) : q(q_) {}

    std::uint32_t size() const { return 2 + 4 * static_cast<std::uint32_t>(q); }
    static std::uint32_t sign(bool negative) { return negative ? 1 : 0; }
    std::uint32_t digit(int d, bool rmark, bool cmark) const {
        return 2 + 4 * static_cast<std::uint32_t>(d) + (rmark ? 1u : 0u) + (cmark ? 2u : 0u);
    }
    static bool is_digit(std::uint32_t sym) { return sym >= 2; }
    static int digit_value(std::uint32_t sym) { return static_cast<int>((sym - 2) / 4); }
    static bool has_radix(std::uint32_t sym) { return sym >= 2 && ((sym - 2) & 1u); }
    static bool has_cursor(std::uint32_t sym) { return sym >= 2 && ((sym - 2) & 2u); }
    std::string name(std::uint32_t sym) const;
    std::vector<std::string> names() const;
};

std::vector<std::uint32_t> pe_symbols(const group_context& ctx, const pe_word& w);
pe_word pe_from_symbols(const group_context& ctx, const std::vector<std::uint32_t>& syms);

} // namespace bsq
