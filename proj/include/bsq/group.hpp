#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "bsq/errors.hpp"

namespace bsq {

using big_int = mpz_class;

/** Base parameter of the group BS(1,q) = <a,t | t a t^-1 = a^q>, q >= 2. */
struct group_context {
    int q;

    explicit group_context(int q_) : q(q_) {
        if (q_ < 2) throw std::invalid_argument("group_context: q must be >= 2");
    }
    bool operator==(const group_context&) const = default;
};

/** Element (r, m) of Z[1/q] x| Z with r = num / q^den_exp.
 *
 *  The fraction is kept normalized: den_exp == 0 or q does not divide num.
 *  Multiplication is (r, m)(r', m') = (r + q^m r', m + m'), so
 *  a = (1, 0) and t = (0, 1).
 */
struct group_element {
    big_int num;
    std::uint32_t den_exp = 0;
    std::int64_t cursor = 0;

    bool operator==(const group_element&) const = default;
};

group_element identity();
group_element gen_a(bool inverse = false);
group_element gen_t(bool inverse = false);

group_element normalized(const group_context& ctx, big_int num, std::int64_t den_exp,
                         std::int64_t cursor);
group_element multiply(const group_context& ctx, const group_element& g, const group_element& h);
group_element inverse(const group_context& ctx, const group_element& g);

/** r as an exact pair (numerator, q-power denominator exponent). */
std::string element_to_string(const group_element& g);

enum class generator : std::uint8_t { a, a_inv, t, t_inv };

generator generator_inverse(generator g);
group_element generator_element(generator g);

/** A word over {a, a^-1, t, t^-1}, one entry per occurrence. */
using generator_word = std::vector<generator>;

/** Parses the textual word grammar: whitespace-separated tokens `a`, `t`,
 *  `a^-1`, `t^3`, ... with signed integer exponents, and `1` for the empty
 *  word.  Throws parse_error on anything else. */
generator_word parse_word(const std::string& text);
std::string word_to_string(const generator_word& w);

group_element eval_word(const group_context& ctx, const generator_word& w);

/** Order used everywhere a "fixed generator order" is required. */
inline constexpr generator generator_order[4] = {generator::a, generator::a_inv, generator::t,
                                                 generator::t_inv};

} // namespace bsq
