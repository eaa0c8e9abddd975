#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bsq/errors.hpp"

namespace bsq {

using state_id = std::uint32_t;
using sym_id = std::uint32_t;

/** Hard cap on states created by any single subset construction or product;
 *  crossing it raises budget_exceeded. */
inline constexpr std::size_t default_state_budget = 2'000'000;

struct nfa {
    sym_id alphabet = 0;
    std::vector<std::vector<std::pair<sym_id, state_id>>> edges;
    std::vector<std::vector<state_id>> eps;
    std::vector<state_id> initials;
    std::vector<state_id> finals;

    explicit nfa(sym_id alphabet_size = 0) : alphabet(alphabet_size) {}

    state_id add_state() {
        edges.emplace_back();
        eps.emplace_back();
        return static_cast<state_id>(edges.size() - 1);
    }
    std::size_t size() const { return edges.size(); }
    void add_edge(state_id s, sym_id x, state_id t) { edges[s].emplace_back(x, t); }
    void add_eps(state_id s, state_id t) { eps[s].push_back(t); }
};

/** Complete deterministic automaton; next[s * alphabet + x] is total.
 *  Minimal instances are BFS-renumbered, so equal languages give equal
 *  structures and dumps are byte-identical. */
struct dfa {
    sym_id alphabet = 0;
    state_id num_states = 0;
    state_id initial = 0;
    std::vector<state_id> next;
    std::vector<std::uint8_t> accepting;

    state_id step(state_id s, sym_id x) const { return next[std::size_t{s} * alphabet + x]; }
    bool accepts(const std::vector<sym_id>& word) const {
        state_id s = initial;
        for (sym_id x : word) s = step(s, x);
        return accepting[s] != 0;
    }
    bool operator==(const dfa&) const = default;
};

dfa determinize(const nfa& a, std::size_t state_budget = default_state_budget);
dfa minimize(const dfa& a);
dfa minimal(const nfa& a, std::size_t state_budget = default_state_budget);
/** Minimal DFA by double reversal; much cheaper than a forward subset
 *  construction when distinct histories share their futures. */
dfa minimal_reversal(const nfa& a, std::size_t state_budget = default_state_budget);
/** Drop states not on some initial-to-final path; keeps subset construction small. */
nfa trim(const nfa& a);
/** Mirror image: every edge flipped, initials and finals swapped. */
nfa reverse(const nfa& a);
/** Merge states with identical outgoing behavior (forward bisimulation);
 *  preserves the language and shrinks later subset constructions. */
nfa quotient_bisim(const nfa& a);

dfa product(const dfa& a, const dfa& b, const std::function<bool(bool, bool)>& op);
dfa intersect(const dfa& a, const dfa& b);
dfa unite(const dfa& a, const dfa& b);
dfa difference(const dfa& a, const dfa& b);
/** Complement relative to an explicit universe, per the no-bare-complement rule. */
dfa complement_in(const dfa& universe, const dfa& a);

bool is_empty_lang(const dfa& a);
bool subset_of(const dfa& a, const dfa& b);
bool equivalent(const dfa& a, const dfa& b);

std::optional<std::vector<sym_id>> shortest_word(const dfa& a);
/** All accepted words of length <= max_len in length-lexicographic order. */
std::vector<std::vector<sym_id>> enumerate_words(const dfa& a, std::size_t max_len,
                                                 std::size_t count_budget = default_state_budget);

dfa dfa_from_words(sym_id alphabet, const std::vector<std::vector<sym_id>>& words);
nfa to_nfa(const dfa& a);

/** Remaps edge labels; std::nullopt erases the letter (becomes epsilon). */
nfa remap_symbols(const nfa& a, sym_id new_alphabet,
                  const std::function<std::optional<sym_id>(sym_id)>& f);
/** Replaces each letter by a word, i.e. the image under a monoid morphism. */
nfa morph_image(const nfa& a, sym_id new_alphabet,
                const std::function<std::vector<sym_id>(sym_id)>& f);

/** Mixed-radix coding of k-track letters; component 0 varies fastest. */
struct tuple_alphabet {
    std::vector<sym_id> sizes;

    sym_id size() const {
        sym_id n = 1;
        for (sym_id s : sizes) n *= s;
        return n;
    }
    sym_id encode(const std::vector<sym_id>& parts) const {
        sym_id id = 0;
        for (std::size_t i = sizes.size(); i-- > 0;) id = id * sizes[i] + parts[i];
        return id;
    }
    std::vector<sym_id> decode(sym_id id) const {
        std::vector<sym_id> parts(sizes.size());
        for (std::size_t i = 0; i < sizes.size(); ++i) {
            parts[i] = id % sizes[i];
            id /= sizes[i];
        }
        return parts;
    }
};

/** Lifts a over component `track` of the tuple alphabet: the tuple word is
 *  accepted iff its projection to that track is accepted. */
dfa cylinder(const dfa& a, const tuple_alphabet& tracks, std::size_t track);

/** keep*, i.e. the words whose every letter satisfies the predicate. */
dfa letter_filter(sym_id alphabet, const std::function<bool(sym_id)>& keep);

/** Letter-aligned rational transduction over (in + blank) x (out + blank).
 *  Pair symbols are encoded x * (out_alphabet + 1) + y, where x == in_alphabet
 *  or y == out_alphabet stands for the blank side. */
struct transducer {
    sym_id in_alphabet = 0;
    sym_id out_alphabet = 0;
    nfa core;

    sym_id pair(std::optional<sym_id> x, std::optional<sym_id> y) const {
        return (x ? *x : in_alphabet) * (out_alphabet + 1) + (y ? *y : out_alphabet);
    }
};

dfa apply_transducer(const transducer& t, const dfa& input,
                     std::size_t state_budget = default_state_budget);

/** Canonical text dump; minimal inputs give byte-identical dumps for equal
 *  languages.  parse_dfa round-trips. */
std::string dump_dfa(const dfa& a, const std::vector<std::string>& sym_names);
std::pair<dfa, std::vector<std::string>> parse_dfa(const std::string& text);

} // namespace bsq
