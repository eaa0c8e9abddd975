#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bsq/bs_automaton.hpp"

namespace bsq {

/** Deterministic, total automaton over a named finite alphabet.  Mirrors the
 *  `dfa alphabet=...` file format. */
struct named_dfa {
    std::vector<std::string> alphabet;
    std::vector<std::string> state_names;
    std::size_t initial = 0;
    std::vector<bool> final_flags;
    std::vector<std::vector<std::size_t>> delta;  // [state][symbol]

    std::size_t state_by_name(const std::string& name) const;
};

named_dfa parse_named_dfa(const std::string& text);
std::string serialize_named_dfa(const named_dfa& d);

/** Instance of the intersection nonemptiness problem: machines over one
 *  shared alphabet with at least two symbols. */
using dfa_instance = std::vector<named_dfa>;

/** Classical product-automaton check, used as the reference answer. */
bool dfa_intersection_nonempty(const dfa_instance& inst);

/** Encodes intersection nonemptiness as identity membership: the result
 *  accepts (0, 0) iff some word is accepted by every machine.
 *
 *  Each machine's language, wrapped in marker digits as 1 f(L) 1 for the
 *  bitwise symbol code f, is written onto its own residue class of tape
 *  cells mod n; a final pass subtracts a number of the block shape
 *  1^n g_1^n ... g_s^n 1^n and then moves freely.  The subtraction can
 *  reach zero only when all tracks carry the same aligned word. */
bs_automaton reduce_intersection(const dfa_instance& inst, const group_context& ctx);

} // namespace bsq
