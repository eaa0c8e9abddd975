#pragma once

#include <string>
#include <vector>

#include "bsq/automata.hpp"
#include "bsq/pe.hpp"

namespace bsq {

/** Regular set of group elements: a minimal complete dfa over the pe symbol
 *  alphabet accepting exactly the canonical pe words of its members.  All
 *  constructors and operations keep the machine minimal, so two pe_sets are
 *  equal as sets iff their machines compare equal. */
struct pe_set {
    group_context ctx;
    dfa machine;
};

pe_set pe_universe(const group_context& ctx);
pe_set pe_empty_set(const group_context& ctx);
pe_set pe_singleton(const group_context& ctx, const group_element& g);
pe_set pe_finite(const group_context& ctx, const std::vector<group_element>& elems);

bool pe_member(const pe_set& s, const group_element& g);
bool pe_is_empty(const pe_set& s);
bool pe_subset(const pe_set& a, const pe_set& b);
bool pe_equal(const pe_set& a, const pe_set& b);

pe_set pe_union(const pe_set& a, const pe_set& b);
pe_set pe_intersection(const pe_set& a, const pe_set& b);
pe_set pe_difference(const pe_set& a, const pe_set& b);
pe_set pe_complement(const pe_set& a);

/** Members whose canonical pe word has at most max_tokens tokens, in
 *  length-lexicographic word order. */
std::vector<group_element> pe_elements(const pe_set& s, std::size_t max_tokens,
                                       std::size_t count_budget = default_state_budget);

std::string pe_dump(const pe_set& s);
pe_set pe_parse(const std::string& text);

/** {g h : g in a, h in b}. */
pe_set pe_product(const pe_set& a, const pe_set& b,
                  std::size_t state_budget = default_state_budget);
/** {g^-1 : g in a}. */
pe_set pe_inverse_set(const pe_set& a, std::size_t state_budget = default_state_budget);
/** {g w : g in s} for a single generator w, via direct word surgery instead
 *  of a full product; agrees with pe_product(s, singleton). */
pe_set pe_right_multiply(const pe_set& s, generator g,
                         std::size_t state_budget = default_state_budget);

// Subsets of the integer row {(n, 0)}.

pe_set pe_integers(const group_context& ctx);
pe_set pe_int_nonneg(const group_context& ctx);
pe_set pe_int_nonpos(const group_context& ctx);
pe_set pe_int_divisible(const group_context& ctx, const big_int& d);
/** {(n, 0) : n > bound} for bound >= 0. */
pe_set pe_int_greater(const group_context& ctx, const big_int& bound);
pe_set pe_int_finite(const group_context& ctx, const std::vector<big_int>& values);

/** {(q^l - q^(l+k), 0) : l in Z}, the defect of conjugating a^(q^l) down by
 *  t^-k; inverted gives the inverse set {(q^(l+k) - q^l, 0)}. */
pe_set pe_power_diff(const group_context& ctx, std::size_t k, bool inverted);

/** Column alphabet for signed-digit words: symbol 0 is the blank, every other
 *  symbol is a digit in [-max_digit, max_digit] with radix/cursor marker bits.
 *  Signed words denote sum(digit_i * q^(pos_i)) with the radix marker fixing
 *  position 0 and the cursor marker fixing the cursor, msd first. */
struct signed_alphabet {
    int max_digit;

    explicit signed_alphabet(int m) : max_digit(m) {}

    sym_id size() const { return 1 + 4 * (2 * static_cast<sym_id>(max_digit) + 1); }
    sym_id blank() const { return 0; }
    sym_id digit(int d, bool rmark, bool cmark) const {
        return 1 + 4 * static_cast<sym_id>(d + max_digit) + (rmark ? 1u : 0u) + (cmark ? 2u : 0u);
    }
    bool is_blank(sym_id x) const { return x == 0; }
    int value(sym_id x) const {
        return x == 0 ? 0 : static_cast<int>((x - 1) / 4) - max_digit;
    }
    bool has_radix(sym_id x) const { return x != 0 && ((x - 1) & 1u); }
    bool has_cursor(sym_id x) const { return x != 0 && ((x - 1) & 2u); }
    std::string name(sym_id x) const;
    std::vector<std::string> names() const;
};

/** The sign-folded image of a pe language: drop the sign token and negate the
 *  digits of negative words.  No blanks occur in the result. */
dfa signed_of_pe(const pe_set& s, const signed_alphabet& sa);

/** All blank-free signed words with exactly one radix and one cursor marker. */
dfa signed_universe(const signed_alphabet& sa);

/** blank* L blank*, for aligning tracks of different spans. */
dfa blank_padded(const dfa& a, const signed_alphabet& sa);

/** Decodes a blank-free signed language back to the set of its values: the
 *  result accepts exactly the canonical pe words of elements denoted by some
 *  word of the input.  Spans are re-sized as needed at the msd end and the
 *  tail, so the input may carry cancelling or surplus columns. */
pe_set signed_to_pe_set(const group_context& ctx, const dfa& a, const signed_alphabet& sa,
                        std::size_t state_budget = default_state_budget);

/** Columnwise adder over triples (x, y, z) of bare digits in
 *  [-max_digit, max_digit], encoded by tuple_alphabet{{2m+1, 2m+1, 2m+1}}
 *  as d + max_digit per track: accepts iff value(x) + value(y) = value(z). */
dfa sum_triple_dfa(int q, int max_digit);

void require_same_q(const pe_set& a, const pe_set& b);

} // namespace bsq
