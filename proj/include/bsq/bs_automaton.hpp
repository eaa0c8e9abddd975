#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bsq/group.hpp"

namespace bsq {

/** Finite automaton over generator words, denoting a rational subset of
 *  BS(1,q).  Mirrors the `bs q=...` file format: named states, one initial,
 *  any number of finals, edges labeled by generator words ("1" = identity). */
struct bs_automaton {
    group_context ctx;
    std::vector<std::string> state_names;
    std::vector<bool> initial_flags;
    std::vector<bool> final_flags;
    struct edge {
        std::size_t src, dst;
        generator_word label;
    };
    std::vector<edge> edges;

    explicit bs_automaton(group_context c) : ctx(c) {}
    std::size_t add_state(const std::string& name, bool initial = false, bool final = false);
    std::size_t state_by_name(const std::string& name) const;
};

bs_automaton parse_bs(const std::string& text);
std::string serialize_bs(const bs_automaton& a);

/** Same language, but every edge carries a single generator, there are no
 *  identity edges, and there is exactly one initial and one final state. */
struct normalized_bs {
    group_context ctx;
    std::size_t num_states = 0;
    struct edge {
        std::size_t src, dst;
        generator label;
    };
    std::vector<edge> edges;
    std::size_t initial = 0;
    std::size_t final = 0;
    /** True iff the empty word is accepted (kept outside the edge relation
     *  so epsilon labels never survive normalization). */
    bool accepts_empty = false;
};

normalized_bs normalize(const bs_automaton& a);

/** Two-way form: each move writes a digit at the current position and steps
 *  one position.  a stands for (1,-1)(0,1) and a^-1 for (-1,-1)(0,1), so all
 *  nonzero writes ride on descending moves; t and t^-1 move without writing.
 *  States 0..num_original-1 coincide with the normalized automaton's. */
struct split_moves {
    int q;
    std::size_t num_states = 0;
    std::size_t num_original = 0;
    struct move {
        std::size_t src, dst;
        int write;
        int dir;
    };
    std::vector<move> moves;
};

split_moves split(const normalized_bs& a);

/** A run is an edge-index sequence through a normalized automaton. */
struct run_metrics {
    group_element production;
    std::int64_t pos = 0;
    std::int64_t pmax = 0;
    std::int64_t pmin = 0;
    std::size_t thickness = 1;
};

run_metrics metrics_of(const normalized_bs& a, const std::vector<std::size_t>& edge_seq);

} // namespace bsq
