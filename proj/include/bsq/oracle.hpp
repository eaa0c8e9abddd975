#pragma once

#include <cstdint>
#include <vector>

#include "bsq/bs_automaton.hpp"

namespace bsq {

/** Brute-force reference answers at desk scale.  Everything here walks the
 *  normalized automaton directly and never touches the compilation pipeline,
 *  so the two routes stay independent. */

/** Productions of all accepted runs with at most max_run_len edges, plus the
 *  identity when the empty word is accepted.  Deduplicated, unordered. */
std::vector<group_element> oracle_elements(const normalized_bs& a, std::size_t max_run_len,
                                           std::size_t node_budget = 4'000'000);

/** True iff some accepted run of at most max_run_len edges produces g (the
 *  empty word counts when accepted). */
bool oracle_member(const normalized_bs& a, const group_element& g, std::size_t max_run_len,
                   std::size_t node_budget = 4'000'000);

struct oracle_run {
    std::vector<std::size_t> edges;
    run_metrics metrics;
};

/** Every run src -> dst with at most max_run_len edges, by explicit
 *  enumeration; count_budget caps the search size. */
std::vector<oracle_run> oracle_runs_between(const normalized_bs& a, std::size_t src,
                                            std::size_t dst, std::size_t max_run_len,
                                            std::size_t count_budget = 4'000'000);

/** oracle_runs_between from the initial to the final state. */
std::vector<oracle_run> oracle_runs(const normalized_bs& a, std::size_t max_run_len,
                                    std::size_t count_budget = 4'000'000);

/** One column of a run's footprint: the digit written at this position, the
 *  run's start/end markers, and the original states the run occupies here.
 *  Positions dipped into by the descending half of an a move belong to the
 *  span but collect no states. */
struct sv_column {
    int digit = 0;
    bool start_marker = false;
    bool end_marker = false;
    std::vector<std::size_t> states;
};

/** The run's columns msd first, starting the run in state src at position 0.
 *  Throws if the edge sequence is not a chain from src. */
std::vector<sv_column> oracle_run_columns(const normalized_bs& a, std::size_t src,
                                          const std::vector<std::size_t>& edge_seq);

/** All sums of multiples of the given nonnegative generators up to cap,
 *  including 0. */
std::vector<big_int> oracle_sumset_star(const std::vector<big_int>& gens, const big_int& cap);

} // namespace bsq
