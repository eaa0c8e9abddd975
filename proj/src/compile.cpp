#include "bsq/compile.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace bsq {

std::string sv_alphabet::name(sym_id x) const {
    if (is_digit(x)) return digits.name(x);
    return "s" + std::to_string(token_state(x)) + (token_barred(x) ? "*" : "");
}

std::vector<std::string> sv_alphabet::names() const {
    std::vector<std::string> out;
    out.reserve(size());
    for (sym_id x = 0; x < size(); ++x) out.push_back(name(x));
    return out;
}

std::size_t thickness_bound(std::size_t n) { return n + 2 * n * n; }

namespace {

/** Crossing of a column boundary: the state on the lower side plus the
 *  direction bit (1 = upward). */
using crossing = std::uint32_t;

crossing make_crossing(std::size_t value, bool up) {
    return static_cast<crossing>(value << 1) | (up ? 1u : 0u);
}
bool crossing_up(crossing c) { return c & 1u; }
std::size_t crossing_value(crossing c) { return c >> 1; }

struct column_key {
    int digit;
    bool smark, emark;
    std::vector<std::uint32_t> block;  // sorted states visited at the column

    auto operator<=>(const column_key&) const = default;
};

/** States from which an accepting state is reachable. */
std::vector<char> alive_states(const dfa& d) {
    std::vector<std::vector<state_id>> rev(d.num_states);
    for (state_id s = 0; s < d.num_states; ++s)
        for (sym_id x = 0; x < d.alphabet; ++x) rev[d.step(s, x)].push_back(s);
    std::vector<char> alive(d.num_states, 0);
    std::vector<state_id> stack;
    for (state_id s = 0; s < d.num_states; ++s)
        if (d.accepting[s]) {
            alive[s] = 1;
            stack.push_back(s);
        }
    while (!stack.empty()) {
        state_id s = stack.back();
        stack.pop_back();
        for (state_id t : rev[s])
            if (!alive[t]) {
                alive[t] = 1;
                stack.push_back(t);
            }
    }
    return alive;
}

/** Enumerates, for one boundary stack, every readable column and the stack
 *  below it.  Visits at the column are matched in time order: the entries of
 *  the upper stack are consumed left to right while the lower stack grows left
 *  to right, and both stay direction-alternating. */
struct column_enumerator {
    const std::vector<std::vector<std::pair<std::size_t, int>>>& down_from;
    const std::vector<std::vector<std::size_t>>& up_into;
    std::size_t num_original;
    std::size_t num_states;
    std::size_t src, dst, k, cap;
    bool start_avail, end_avail;
    std::size_t budget;
    std::size_t steps = 0;

    const std::vector<crossing>* upper = nullptr;
    std::map<column_key, std::set<std::vector<crossing>>> results;
    std::vector<crossing> lower;
    std::vector<std::uint32_t> block;
    std::size_t origs = 0;
    std::vector<std::size_t> min_visits;
    // Fewest next-column visits that can consume the lower stack: one per
    // entry, except an adjacent down-up pair on one state shares a bottom
    // turn.  Greedy adjacent matching is optimal and the count never
    // decreases as the stack grows, so it prunes dead stacks early.
    std::vector<char> paired;
    std::size_t consume_visits = 0;

    void push_c(crossing c) {
        bool pairs = !lower.empty() && !paired.back() && !crossing_up(lower.back()) &&
                     crossing_up(c) && crossing_value(lower.back()) == crossing_value(c);
        lower.push_back(c);
        paired.push_back(pairs ? 1 : 0);
        if (!pairs) ++consume_visits;
    }
    void pop_c() {
        if (!paired.back()) --consume_visits;
        lower.pop_back();
        paired.pop_back();
    }

    void run(const std::vector<crossing>& a) {
        upper = &a;
        results.clear();
        lower.clear();
        block.clear();
        paired.clear();
        consume_visits = 0;
        origs = 0;
        steps = 0;
        // Fewest visits that can consume each suffix of the upper stack; a
        // bottom turn eats an adjacent down-up pair with one visit.
        min_visits.assign(a.size() + 1, 0);
        for (std::size_t i = a.size(); i-- > 0;) {
            min_visits[i] = 1 + min_visits[i + 1];
            if (i + 1 < a.size() && !crossing_up(a[i]) &&
                a[i + 1] == make_crossing(crossing_value(a[i]), true))
                min_visits[i] = std::min(min_visits[i], 1 + min_visits[i + 2]);
        }
        go(0, 0, false, false, 0);
    }

    bool can_append(bool up) const {
        return lower.empty() || crossing_up(lower.back()) != up;
    }

    /** Runs body with the visit of v recorded, unless it would exceed k. */
    template <class Fn>
    void visiting(std::size_t v, Fn body) {
        if (v >= num_original) {
            body();
            return;
        }
        if (origs + 1 > k) return;
        ++origs;
        auto it = std::lower_bound(block.begin(), block.end(), v);
        bool fresh = it == block.end() || *it != v;
        if (fresh) it = block.insert(it, static_cast<std::uint32_t>(v));
        body();
        if (fresh) block.erase(std::lower_bound(block.begin(), block.end(), v));
        --origs;
    }

    // A column's digit, block, and stacks are invariant under reordering
    // commuting moves, so each valid interleaving class is explored once:
    // moves that only consume the upper stack come before moves that only
    // append to the lower stack (mode 1), and the point visit comes last of
    // all (mode 2).  Moves that both consume and append reset the order.
    void go(std::size_t i, int digit, bool s_used, bool e_used, int mode) {
        if (++steps > budget) throw budget_exceeded("thin_run_automaton: column search budget");
        if (origs + min_visits[i] > k || consume_visits > k) return;
        const auto& a = *upper;
        if (i == a.size())
            results[column_key{digit, s_used, e_used, block}].insert(lower);
        if (mode == 2) return;

        if (i < a.size()) {
            std::size_t v = crossing_value(a[i]);
            if (!crossing_up(a[i])) {
                // Pass downward: consume (v, D), append the move's target.
                if (lower.size() < cap && can_append(false))
                    visiting(v, [&] {
                        for (auto [w, x] : down_from[v]) {
                            push_c(make_crossing(w, false));
                            go(i + 1, digit + x, s_used, e_used, 0);
                            pop_c();
                        }
                    });
                // Bottom turn: consume the adjacent pair (v, D), (v, U).
                if (mode == 0 && i + 1 < a.size() && a[i + 1] == make_crossing(v, true))
                    visiting(v, [&] { go(i + 2, digit, s_used, e_used, 0); });
                // End visit entered from above.
                if (mode == 0 && end_avail && !e_used && v == dst)
                    visiting(v, [&] { go(i + 1, digit, s_used, true, 0); });
            } else {
                // Pass upward: consume (v, U), append the entering move's source.
                if (lower.size() < cap && can_append(true))
                    visiting(v, [&] {
                        for (std::size_t u : up_into[v]) {
                            push_c(make_crossing(u, true));
                            go(i + 1, digit, s_used, e_used, 0);
                            pop_c();
                        }
                    });
                // Start visit leaving upward.
                if (mode == 0 && start_avail && !s_used && v == src)
                    visiting(v, [&] { go(i + 1, digit, true, e_used, 0); });
            }
        }

        // Top turn fully below the boundary: insert (u, U), (w, D).
        if (lower.size() + 2 <= cap && can_append(true)) {
            for (std::size_t v = 0; v < num_states; ++v) {
                if (up_into[v].empty() || down_from[v].empty()) continue;
                visiting(v, [&] {
                    for (std::size_t u : up_into[v])
                        for (auto [w, x] : down_from[v]) {
                            push_c(make_crossing(u, true));
                            push_c(make_crossing(w, false));
                            go(i, digit + x, s_used, e_used, 1);
                            pop_c();
                            pop_c();
                        }
                });
            }
        }
        // Start visit leaving downward.
        if (start_avail && !s_used && lower.size() < cap && can_append(false))
            visiting(src, [&] {
                for (auto [w, x] : down_from[src]) {
                    push_c(make_crossing(w, false));
                    go(i, digit + x, true, e_used, 1);
                    pop_c();
                }
            });
        // End visit entered from below.
        if (end_avail && !e_used && lower.size() < cap && can_append(true))
            visiting(dst, [&] {
                for (std::size_t u : up_into[dst]) {
                    push_c(make_crossing(u, true));
                    go(i, digit, s_used, true, 1);
                    pop_c();
                }
            });
        // Point run: start and end on one crossing-free visit.
        if (i == a.size() && start_avail && end_avail && !s_used && !e_used && src == dst)
            visiting(src, [&] { go(i, digit, true, true, 2); });
    }
};

} // namespace

dfa thin_run_automaton(const split_moves& m, const sv_alphabet& sa, std::size_t src,
                       std::size_t dst, std::size_t k, std::size_t state_budget) {
    if (sa.num_states != m.num_original)
        throw std::invalid_argument("thin_run_automaton: alphabet sized for a different automaton");
    if (static_cast<std::size_t>(sa.digits.max_digit) < k)
        throw std::invalid_argument("thin_run_automaton: digit range below occupancy bound");

    std::vector<std::vector<std::pair<std::size_t, int>>> down_from(m.num_states);
    std::vector<std::vector<std::size_t>> up_into(m.num_states);
    for (const auto& mv : m.moves) {
        if (mv.dir < 0)
            down_from[mv.src].emplace_back(mv.dst, mv.write);
        else
            up_into[mv.dst].push_back(mv.src);
    }

    std::size_t n = m.num_original;
    nfa out(sa.size());

    // Boundary nodes keyed by (stack, start_seen, end_seen); chain nodes spell
    // out one column: digit symbol, then one token per state.
    using node_key = std::pair<std::vector<crossing>, std::uint32_t>;
    std::map<node_key, state_id> nodes;
    std::vector<node_key> todo;

    auto intern = [&](const std::vector<crossing>& stack, bool s, bool e) {
        node_key key{stack, (s ? 1u : 0u) | (e ? 2u : 0u)};
        auto it = nodes.find(key);
        if (it != nodes.end()) return it->second;
        if (nodes.size() >= state_budget) throw budget_exceeded("thin_run_automaton: state budget");
        state_id id = out.add_state();
        nodes.emplace(key, id);
        todo.push_back(key);
        if (stack.empty() && s && e) out.finals.push_back(id);
        return id;
    };

    // Every interior stack is consumed by the next column's at most k visits,
    // each eating at most two entries, so live stacks never exceed 2k.
    column_enumerator en{down_from, up_into,          n,   m.num_states, src, dst, k,
                         2 * k,     false,            false, state_budget};

    out.initials.push_back(intern({}, false, false));
    using chain_key = std::tuple<state_id, sym_id, std::size_t, std::vector<std::uint32_t>>;
    std::map<chain_key, state_id> chain;

    while (!todo.empty()) {
        node_key key = todo.back();
        todo.pop_back();
        state_id here = nodes.at(key);
        bool s_seen = key.second & 1u, e_seen = key.second & 2u;
        en.start_avail = !s_seen;
        en.end_avail = !e_seen;
        en.run(key.first);
        for (const auto& [col, stacks] : en.results) {
            sym_id digit_sym = sa.digits.digit(col.digit, col.smark, col.emark);
            // Trie over the token suffix, shared per (node, digit symbol).
            state_id cur = 0;
            {
                auto it = chain.find({here, digit_sym, 0, {}});
                if (it == chain.end()) {
                    cur = out.add_state();
                    chain.emplace(chain_key{here, digit_sym, 0, {}}, cur);
                    out.add_edge(here, digit_sym, cur);
                } else {
                    cur = it->second;
                }
            }
            std::vector<std::uint32_t> prefix;
            for (std::size_t j = 0; j < n; ++j) {
                bool barred = std::binary_search(col.block.begin(), col.block.end(),
                                                static_cast<std::uint32_t>(j));
                sym_id tok = sa.state_token(j, barred);
                if (barred) prefix.push_back(static_cast<std::uint32_t>(j));
                if (j + 1 == n) {
                    for (const auto& b : stacks)
                        out.add_edge(cur, tok,
                                     intern(b, s_seen || col.smark, e_seen || col.emark));
                } else {
                    auto it = chain.find({here, digit_sym, j + 1, prefix});
                    if (it == chain.end()) {
                        state_id nxt = out.add_state();
                        chain.emplace(chain_key{here, digit_sym, j + 1, prefix}, nxt);
                        out.add_edge(cur, tok, nxt);
                        cur = nxt;
                    } else {
                        cur = it->second;
                    }
                }
            }
        }
    }
    return minimal(out, state_budget);
}

namespace {

dfa project_to_signed(const dfa& a, const sv_alphabet& sa, std::size_t budget) {
    nfa n = remap_symbols(to_nfa(a), sa.digits.size(), [&](sym_id x) -> std::optional<sym_id> {
        if (sa.is_digit(x)) return x;
        return std::nullopt;
    });
    return determinize(n, budget);
}

/** Footprint words of runs that start and end on the same column and reach at
 *  most one column below it, which must be an untouched dip column. */
dfa left_return_filter(const sv_alphabet& sa) {
    // Regions: 0 = above the marked column, 1 = marked column passed,
    // 2 = one trailing dip column consumed.  Phase counts tokens.
    std::size_t n = sa.num_states;
    std::size_t phases = n + 1;
    state_id dead = static_cast<state_id>(3 * phases);
    dfa d;
    d.alphabet = sa.size();
    d.num_states = dead + 1;
    d.initial = 0;
    d.next.assign(std::size_t{d.num_states} * d.alphabet, dead);
    d.accepting.assign(d.num_states, 0);
    auto id = [&](std::size_t region, std::size_t phase) {
        return static_cast<state_id>(region * phases + phase);
    };
    for (std::size_t region = 0; region < 3; ++region) {
        for (sym_id x = 0; x < sa.size(); ++x) {
            if (sa.is_digit(x)) {
                bool r = sa.digits.has_radix(x), c = sa.digits.has_cursor(x);
                state_id* slot = &d.next[std::size_t{id(region, 0)} * d.alphabet + x];
                if (region == 0 && !r && !c)
                    *slot = id(0, 1);
                else if (region == 0 && r && c)
                    *slot = id(1, 1);
                else if (region == 1 && !r && !c && sa.digits.value(x) == 0)
                    *slot = id(2, 1);
            } else {
                for (std::size_t ph = 1; ph < phases; ++ph) {
                    if (region == 2 && sa.token_barred(x)) continue;
                    if (sa.token_state(x) != ph - 1) continue;
                    d.next[std::size_t{id(region, ph)} * d.alphabet + x] =
                        id(region, ph + 1 == phases ? 0 : ph + 1);
                }
            }
        }
    }
    d.accepting[id(1, 0)] = 1;
    d.accepting[id(2, 0)] = 1;
    return d;
}

pe_set pe_negate(const pe_set& s) {
    dfa d = s.machine;
    for (state_id st = 0; st < d.num_states; ++st)
        std::swap(d.next[std::size_t{st} * d.alphabet + 0], d.next[std::size_t{st} * d.alphabet + 1]);
    pe_set out{s.ctx, minimize(intersect(d, pe_universe(s.ctx).machine))};
    if (pe_member(s, identity())) out = pe_union(out, pe_singleton(s.ctx, identity()));
    return out;
}

big_int magnitude_of_shortest(const pe_set& s) {
    auto w = shortest_word(s.machine);
    if (!w) throw std::logic_error("magnitude_of_shortest: empty set");
    pe_word p = pe_from_symbols(s.ctx, *w);
    group_element g = pe_decode(s.ctx, p);
    return abs(g.num);
}

struct gcd_info {
    big_int d;
    big_int witness_max;  // max(|r|, per-prime witnesses)
};

/** gcd of the nonzero integer set nz, via trial division of one element and
 *  divisibility emptiness tests. */
gcd_info set_gcd(const group_context& ctx, const pe_set& nz) {
    big_int r = magnitude_of_shortest(nz);
    if (r > big_int("1000000000000"))
        throw budget_exceeded("set_gcd: witness magnitude too large");
    gcd_info info{1, r};
    big_int rest = r;
    for (big_int p = 2; p * p <= rest;) {
        if (rest % p == 0) {
            unsigned e = 0;
            while (rest % p == 0) {
                rest /= p;
                ++e;
            }
            big_int pw = 1;
            unsigned j = 0;
            // Largest j <= e with nz contained in p^j Z.
            while (j < e) {
                if (!pe_is_empty(pe_difference(nz, pe_int_divisible(ctx, pw * p)))) break;
                pw *= p;
                ++j;
            }
            info.d *= pw;
            if (j < e) {
                pe_set out = pe_difference(nz, pe_int_divisible(ctx, pw * p));
                info.witness_max = std::max(info.witness_max, magnitude_of_shortest(out));
            }
        } else {
            ++p;
        }
    }
    if (rest > 1) {
        pe_set out = pe_difference(nz, pe_int_divisible(ctx, rest));
        if (pe_is_empty(out))
            info.d *= rest;
        else
            info.witness_max = std::max(info.witness_max, magnitude_of_shortest(out));
    }
    return info;
}

/** Star of a set of nonnegative integers: reachable sums up to B = W^2 by
 *  direct dynamic programming, all multiples of the gcd beyond. */
pe_set star_nonneg(const group_context& ctx, const pe_set& x, const gcd_info& info,
                   std::size_t state_budget) {
    big_int bound = info.witness_max * info.witness_max;
    if (bound > 4'000'000) throw budget_exceeded("star_nonneg: Frobenius window too large");
    std::size_t b = bound.get_ui();

    pe_set small = pe_difference(x, pe_int_greater(ctx, bound));
    std::size_t max_tokens = 3;
    for (big_int v = bound; v > 0; v /= ctx.q) ++max_tokens;
    std::vector<char> reach(b + 1, 0);
    reach[0] = 1;
    for (const auto& g : pe_elements(small, max_tokens, state_budget)) {
        if (g.num <= 0) continue;
        std::size_t step = g.num.get_ui();
        for (std::size_t i = step; i <= b; ++i)
            if (reach[i - step]) reach[i] = 1;
    }

    std::size_t d = info.d.get_ui();
    std::vector<big_int> low;
    big_int gap = -1;
    for (std::size_t i = 0; i <= b; i += d) {
        if (reach[i])
            low.push_back(big_int(static_cast<unsigned long>(i)));
        else
            gap = big_int(static_cast<unsigned long>(i));
    }
    pe_set tail = pe_intersection(pe_int_divisible(ctx, info.d), pe_int_nonneg(ctx));
    if (gap < 0) return tail;
    std::vector<big_int> below_gap;
    for (const auto& v : low)
        if (v < gap) below_gap.push_back(v);
    return pe_union(pe_int_finite(ctx, below_gap), pe_intersection(tail, pe_int_greater(ctx, gap)));
}

/** Closure of an integer pe_set under addition (all finite sums). */
pe_set integer_star(const group_context& ctx, const pe_set& x0, std::size_t state_budget) {
    pe_set x = pe_intersection(x0, pe_integers(ctx));
    pe_set zero = pe_singleton(ctx, identity());
    pe_set nz = pe_difference(x, zero);
    if (pe_is_empty(nz)) return zero;
    pe_set neg = pe_intersection(nz, pe_int_nonpos(ctx));
    bool has_neg = !pe_is_empty(neg);
    bool has_pos = !pe_is_empty(pe_difference(nz, neg));
    gcd_info info = set_gcd(ctx, nz);
    if (has_pos && has_neg) return pe_int_divisible(ctx, info.d);
    if (!has_pos) return pe_negate(star_nonneg(ctx, pe_negate(x), info, state_budget));
    return star_nonneg(ctx, x, info, state_budget);
}

} // namespace

pe_set left_cycle_star(const group_context& ctx, const split_moves& m, const sv_alphabet& sa,
                       std::size_t p, std::size_t k, std::size_t state_budget) {
    dfa runs = thin_run_automaton(m, sa, p, p, k, state_budget);
    dfa both = intersect(runs, left_return_filter(sa));
    dfa sig = project_to_signed(both, sa, state_budget);
    pe_set values = signed_to_pe_set(ctx, sig, sa.digits, state_budget);
    return integer_star(ctx, values, state_budget);
}

dfa fold_cycles(const group_context& ctx, const dfa& base, const sv_alphabet& sa,
                std::size_t p, const pe_set& cycle_values, std::size_t state_budget) {
    if (cycle_values.ctx.q != ctx.q) throw q_mismatch("fold_cycles: mixed base parameters");
    const int q = ctx.q;
    const int maxd = sa.digits.max_digit;
    if (maxd < q - 1) throw std::invalid_argument("fold_cycles: digit range below q - 1");
    const signed_alphabet small(q - 1);
    dfa d2 = blank_padded(signed_of_pe(cycle_values, small), small);
    const int dbound = (maxd + 2 * (q - 1) + (q - 2)) / (q - 1);
    const std::vector<char> alive1 = alive_states(base), alive2 = alive_states(d2);
    if (!alive1[base.initial] || !alive2[d2.initial]) return base;

    // Direct product: base walks the footprint, d2 walks one inserted value,
    // delta carries the running digit discrepancy msd first.  The inserted
    // value's radix column must land where state p is barred.
    nfa out(sa.size());
    using key = std::tuple<state_id, state_id, int, std::uint32_t, std::uint8_t>;
    std::map<key, state_id> nodes;
    std::vector<key> todo;
    auto intern = [&](state_id u1, state_id u2, int delta, std::uint32_t phase, bool aflag) {
        key kk{u1, u2, delta, phase, aflag ? 1 : 0};
        auto it = nodes.find(kk);
        if (it != nodes.end()) return it->second;
        if (nodes.size() >= state_budget) throw budget_exceeded("fold_cycles: state budget");
        state_id id = out.add_state();
        nodes.emplace(kk, id);
        todo.push_back(kk);
        if (phase == 0 && delta == 0 && base.accepting[u1] && d2.accepting[u2])
            out.finals.push_back(id);
        return id;
    };
    out.initials.push_back(intern(base.initial, d2.initial, 0, 0, false));

    std::size_t n = sa.num_states;
    while (!todo.empty()) {
        auto [u1, u2, delta, phase, afl] = todo.back();
        todo.pop_back();
        state_id here = nodes.at(key{u1, u2, delta, phase, afl});
        if (phase == 0) {
            for (sym_id x1 = 0; x1 < sa.digits.size(); ++x1) {
                state_id v1 = base.step(u1, x1);
                if (!alive1[v1]) continue;
                bool r1 = sa.digits.has_radix(x1), c1 = sa.digits.has_cursor(x1);
                int val1 = sa.digits.value(x1);
                for (sym_id x2 = 0; x2 < small.size(); ++x2) {
                    state_id v2 = d2.step(u2, x2);
                    if (!alive2[v2]) continue;
                    bool anchor = small.has_radix(x2);
                    int sum = q * delta + val1 + small.value(x2);
                    int lo = std::max(-(q - 1), sum - dbound);
                    int hi = std::min(q - 1, sum + dbound);
                    for (int d3 = lo; d3 <= hi; ++d3)
                        out.add_edge(here, sa.digits.digit(d3, r1, c1),
                                     intern(v1, v2, sum - d3, 1, afl || anchor));
                }
            }
        } else {
            std::size_t j = phase - 1;
            for (int barred = 0; barred < 2; ++barred) {
                sym_id tok = sa.state_token(j, barred != 0);
                if (afl && j == p && !barred) continue;
                state_id v1 = base.step(u1, tok);
                if (!alive1[v1]) continue;
                bool next_afl = afl && j != p;
                out.add_edge(here, tok,
                             intern(v1, u2, delta, phase + 1 == n + 1 ? 0 : phase + 1, next_afl));
            }
        }
    }
    return minimize(unite(determinize(trim(out), state_budget), base));
}

namespace {

/** Adaptive thin-run compile of one strongly connected machine: the sets of
 *  elements realized by internal runs from src to every state, exact iff the
 *  closure certificate held at the thickness reached. */
struct engine_result {
    std::vector<pe_set> sets;
    bool certified = false;
};

engine_result compile_states(const group_context& ctx, const normalized_bs& nb, std::size_t src,
                             const compile_options& opts, compile_stats& st) {
    split_moves m = split(nb);
    std::size_t n = nb.num_states;
    std::size_t kmax = opts.k_max ? opts.k_max : thickness_bound(n);
    pe_set zero = pe_singleton(ctx, identity());

    engine_result last;
    for (std::size_t k = opts.k_start; k <= kmax; ++k) {
        ++st.passes;
        st.k_used = std::max(st.k_used, k);
        sv_alphabet sa(std::max<int>(static_cast<int>(k), ctx.q - 1), n);

        std::vector<pe_set> stars;
        stars.reserve(n);
        for (std::size_t p = 0; p < n; ++p)
            stars.push_back(left_cycle_star(ctx, m, sa, p, k, opts.state_budget));

        std::vector<pe_set> sets;
        sets.reserve(n);
        for (std::size_t dstate = 0; dstate < n; ++dstate) {
            dfa base = thin_run_automaton(m, sa, src, dstate, k, opts.state_budget);
            st.thin_run_states = std::max<std::size_t>(st.thin_run_states, base.num_states);
            for (std::size_t p = 0; p < n; ++p) {
                if (pe_equal(stars[p], zero)) continue;
                base = fold_cycles(ctx, base, sa, p, stars[p], opts.state_budget);
            }
            dfa sig = project_to_signed(base, sa, opts.state_budget);
            sets.push_back(signed_to_pe_set(ctx, sig, sa.digits, opts.state_budget));
        }
        last.sets = std::move(sets);

        bool ok = pe_member(last.sets[src], identity());
        for (const auto& e : nb.edges) {
            if (!ok) break;
            ok = pe_subset(pe_right_multiply(last.sets[e.src], e.label, opts.state_budget),
                           last.sets[e.dst]);
        }
        if (ok) {
            last.certified = true;
            return last;
        }
    }
    return last;
}

/** Strongly connected components of the normalized transition graph in
 *  topological order of the condensation. */
struct condensation {
    std::vector<std::size_t> comp;
    std::vector<std::vector<std::size_t>> members;
};

condensation condense(const normalized_bs& nb) {
    std::size_t n = nb.num_states;
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& e : nb.edges) adj[e.src].push_back(e.dst);

    // Iterative Tarjan; components come out in reverse topological order.
    condensation c;
    c.comp.assign(n, SIZE_MAX);
    std::vector<std::size_t> index(n, SIZE_MAX), low(n), on_stack_pos;
    std::vector<char> on_stack(n, 0);
    std::size_t next_index = 0;
    struct frame {
        std::size_t v;
        std::size_t edge;
    };
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != SIZE_MAX) continue;
        std::vector<frame> stack{{root, 0}};
        while (!stack.empty()) {
            auto& [v, edge] = stack.back();
            if (edge == 0) {
                index[v] = low[v] = next_index++;
                on_stack_pos.push_back(v);
                on_stack[v] = 1;
            }
            if (edge < adj[v].size()) {
                std::size_t w = adj[v][edge++];
                if (index[w] == SIZE_MAX) {
                    stack.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
            } else {
                if (low[v] == index[v]) {
                    std::vector<std::size_t> scc;
                    std::size_t w;
                    do {
                        w = on_stack_pos.back();
                        on_stack_pos.pop_back();
                        on_stack[w] = 0;
                        c.comp[w] = c.members.size();
                        scc.push_back(w);
                    } while (w != v);
                    c.members.push_back(std::move(scc));
                }
                std::size_t done = v;
                stack.pop_back();
                if (!stack.empty()) low[stack.back().v] = std::min(low[stack.back().v], low[done]);
            }
        }
    }
    std::reverse(c.members.begin(), c.members.end());
    for (std::size_t i = 0; i < c.members.size(); ++i)
        for (std::size_t v : c.members[i]) c.comp[v] = i;
    return c;
}

} // namespace

compiled_set compile_rational(const bs_automaton& a, const compile_options& opts) {
    group_context ctx = a.ctx;
    normalized_bs nb = normalize(a);
    std::size_t n = nb.num_states;
    compile_stats st;

    // Every accepting run crosses each strongly connected component in one
    // contiguous segment, so components compile separately at their own
    // thickness and the segments recombine with exact products and unions.
    condensation c = condense(nb);
    std::vector<char> has_internal(c.members.size(), 0);
    for (const auto& e : nb.edges)
        if (c.comp[e.src] == c.comp[e.dst]) has_internal[c.comp[e.src]] = 1;

    pe_set empty = pe_empty_set(ctx);
    std::vector<pe_set> arrival(n, empty);
    std::vector<char> arrived(n, 0);
    arrival[nb.initial] = pe_singleton(ctx, identity());
    arrived[nb.initial] = 1;
    std::vector<pe_set> through(n, empty);
    bool certified = true;

    for (std::size_t x = 0; x < c.members.size(); ++x) {
        const auto& xs = c.members[x];
        std::vector<std::size_t> entries;
        for (std::size_t v : xs)
            if (arrived[v]) entries.push_back(v);
        if (entries.empty()) continue;

        if (!has_internal[x]) {
            through[xs[0]] = arrival[xs[0]];
        } else {
            std::vector<std::size_t> remap(n, SIZE_MAX);
            normalized_bs sub{ctx};
            sub.num_states = xs.size();
            for (std::size_t i = 0; i < xs.size(); ++i) remap[xs[i]] = i;
            for (const auto& e : nb.edges)
                if (remap[e.src] != SIZE_MAX && remap[e.dst] != SIZE_MAX)
                    sub.edges.push_back({remap[e.src], remap[e.dst], e.label});
            for (std::size_t e : entries) {
                engine_result r = compile_states(ctx, sub, remap[e], opts, st);
                certified = certified && r.certified;
                for (std::size_t v : xs) {
                    pe_set seg = pe_product(arrival[e], r.sets[remap[v]], opts.state_budget);
                    through[v] = pe_is_empty(through[v]) ? seg : pe_union(through[v], seg);
                }
            }
        }
        for (const auto& e : nb.edges) {
            if (c.comp[e.src] != x || c.comp[e.dst] == x) continue;
            if (pe_is_empty(through[e.src])) continue;
            pe_set step = pe_right_multiply(through[e.src], e.label, opts.state_budget);
            arrival[e.dst] = arrived[e.dst] ? pe_union(arrival[e.dst], step) : step;
            arrived[e.dst] = 1;
        }
    }

    pe_set answer = through[nb.final];
    if (nb.accepts_empty) answer = pe_union(answer, pe_singleton(ctx, identity()));
    st.certified = certified;
    st.set_states = answer.machine.num_states;
    return {answer, st};
}

} // namespace bsq
