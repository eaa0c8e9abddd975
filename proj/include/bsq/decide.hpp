#pragma once

#include "bsq/compile.hpp"

namespace bsq {

/** Membership of one element in the rational set denoted by a. */
bool rational_membership(const bs_automaton& a, const group_element& g,
                         const compile_options& opts = {});

/** Compiled matcher for repeated membership queries against one automaton. */
struct fixed_subset_matcher {
    pe_set set;

    explicit fixed_subset_matcher(const bs_automaton& a, const compile_options& opts = {});
    bool contains(const group_element& g) const;
};

/** True iff right translation by t^(+-k) and by every conjugation defect
 *  (q^l - q^(l+k), 0) and its inverse maps s into itself. */
bool is_k_periodic(const pe_set& s, std::size_t k,
                   std::size_t state_budget = default_state_budget);

struct recognizability_result {
    bool recognizable = false;    // true: witness found
    std::size_t witness_k = 0;    // valid when recognizable
    std::size_t tried_up_to = 0;  // k values exhausted otherwise
};

/** Searches k = 1..k_max for a periodicity witness.  k_max 0 picks the state
 *  count of the set's machine.  A negative answer only means no witness up to
 *  tried_up_to. */
recognizability_result is_recognizable_bounded(const pe_set& s, std::size_t k_max = 0,
                                               std::size_t state_budget = default_state_budget);

/** One-state loop automaton accepting the subgroup generated by the words. */
bs_automaton subgroup_automaton(const group_context& ctx,
                                const std::vector<generator_word>& gens);

struct index_result {
    bool finite = false;
    std::size_t index = 0;        // valid when finite
    std::size_t cosets_seen = 0;  // distinct cosets found before giving up
};

/** Explores right cosets of the subgroup generated by gens, stopping without
 *  an answer once more than max_cosets distinct cosets appear. */
index_result has_finite_index_bounded(const group_context& ctx,
                                      const std::vector<generator_word>& gens,
                                      std::size_t max_cosets = 64,
                                      const compile_options& opts = {});

} // namespace bsq
