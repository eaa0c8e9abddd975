#pragma once

#include <cstdint>
#include <vector>

#include "bsq/bs_automaton.hpp"
#include "bsq/pe_set.hpp"

namespace bsq {

/** Interleaved column alphabet for run footprints.  Each column is one digit
 *  symbol from `digits` followed by one token per automaton state, barred when
 *  the run occupies that state at this column.  The digit's radix mark sits on
 *  the run's start column and the cursor mark on its end column. */
struct sv_alphabet {
    signed_alphabet digits;
    std::size_t num_states;

    sv_alphabet(int max_digit, std::size_t n) : digits(max_digit), num_states(n) {}

    sym_id size() const { return digits.size() + 2 * static_cast<sym_id>(num_states); }
    bool is_digit(sym_id x) const { return x < digits.size(); }
    sym_id state_token(std::size_t state, bool barred) const {
        return digits.size() + 2 * static_cast<sym_id>(state) + (barred ? 1u : 0u);
    }
    bool token_barred(sym_id x) const { return (x - digits.size()) & 1u; }
    std::size_t token_state(sym_id x) const { return (x - digits.size()) / 2; }
    std::string name(sym_id x) const;
    std::vector<std::string> names() const;
};

/** Occupancy bound n + 2n^2 that suffices for exactness on n states. */
std::size_t thickness_bound(std::size_t n);

/** Footprint language of runs src -> dst whose per-column occupancy stays at
 *  most k: for every column of the visited span, msd first, the total digit
 *  written there, the start/end marks and the set of states visited.  Closed
 *  under zero-column padding at both ends. */
dfa thin_run_automaton(const split_moves& m, const sv_alphabet& sa, std::size_t src,
                       std::size_t dst, std::size_t k,
                       std::size_t state_budget = default_state_budget);

/** Integer productions of occupancy-k runs p -> p that stay at nonnegative
 *  positions and return to their start height, closed under addition, as a
 *  pe_set of (n, 0) elements.  Always contains 0. */
pe_set left_cycle_star(const group_context& ctx, const split_moves& m, const sv_alphabet& sa,
                       std::size_t p, std::size_t k,
                       std::size_t state_budget = default_state_budget);

/** One fold step: keeps every footprint word of base and additionally, for
 *  each value v of cycle_values, the word with v added in at some column where
 *  state p is barred.  Result digits are renormalized into [-(q-1), q-1]. */
dfa fold_cycles(const group_context& ctx, const dfa& base, const sv_alphabet& sa,
                std::size_t p, const pe_set& cycle_values,
                std::size_t state_budget = default_state_budget);

struct compile_stats {
    std::size_t k_used = 0;
    bool certified = false;
    std::size_t passes = 0;
    std::size_t thin_run_states = 0;
    std::size_t set_states = 0;
};

struct compiled_set {
    pe_set set;
    compile_stats stats;
};

struct compile_options {
    std::size_t k_start = 1;
    std::size_t k_max = 0;  // 0: thickness_bound(n)
    std::size_t state_budget = default_state_budget;
};

/** The set of elements denoted by the automaton's language.  The occupancy
 *  bound k grows from k_start until the per-state sets pass the closure
 *  certificate (identity reaches the initial state, and every edge maps its
 *  source set into its target set), which pins the result exactly; stats
 *  reports the k used and whether certification succeeded before k_max. */
compiled_set compile_rational(const bs_automaton& a, const compile_options& opts = {});

} // namespace bsq
