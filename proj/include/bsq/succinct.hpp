#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bsq/automata.hpp"

namespace bsq {

/** Circuit in negation normal form over state-bit variables.  Variables
 *  0..bits-1 are the current-state bits x_i; bits..2*bits-1 are the
 *  next-state bits y_i (only meaningful in transition formulas). */
struct formula {
    struct node {
        enum class kind : std::uint8_t { lit, tt, ff, conj, disj };
        kind k = kind::tt;
        std::uint32_t var = 0;
        bool positive = true;
        std::vector<std::uint32_t> kids;
    };
    std::vector<node> pool;
    std::uint32_t root = 0;
};

/** Tri-state evaluation under a partial assignment (-1 unknown, 0, 1). */
int eval_formula(const formula& f, const std::vector<int>& assign);

/** Convenience builder keeping the pool in one place. */
struct formula_builder {
    formula f;

    std::uint32_t lit(std::uint32_t var, bool positive);
    std::uint32_t tt();
    std::uint32_t ff();
    std::uint32_t conj(std::vector<std::uint32_t> kids);
    std::uint32_t disj(std::vector<std::uint32_t> kids);
    formula done(std::uint32_t root);
};

/** Automaton with 2^bits states addressed by bit vectors; acceptance and
 *  transitions are formulas instead of tables. */
struct succinct_automaton {
    sym_id alphabet = 0;
    std::size_t bits = 0;
    formula initial;
    formula final_cond;
    std::vector<formula> delta;  // one per symbol
};

std::string print_succinct(const succinct_automaton& a);
succinct_automaton parse_succinct(const std::string& text);

/** Explicit form; throws budget_exceeded when 2^bits > max_states. */
nfa expand_succinct(const succinct_automaton& a, std::size_t max_states = 4096);

/** Word membership without expansion: the reachable state set is carried
 *  explicitly and successors are enumerated by branching on unknown next-state
 *  bits, pruning falsified formulas. */
bool otf_membership(const succinct_automaton& a, const std::vector<sym_id>& word,
                    std::size_t state_budget = default_state_budget);

/** Cube encoding of an explicit automaton (no epsilon edges) into
 *  ceil(log2(states)) bits. */
succinct_automaton nfa_to_succinct(const nfa& a);

/** Unary-alphabet counter mod 2^m: accepts exactly the word lengths divisible
 *  by 2^m, in m bits; any explicit automaton needs 2^m states. */
succinct_automaton succinct_counter(std::size_t m);

/** Unary-alphabet saturating counter: accepts lengths >= 2^m - 1 in m bits. */
succinct_automaton succinct_threshold(std::size_t m);

} // namespace bsq
