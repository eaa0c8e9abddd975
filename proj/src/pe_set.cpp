#include "bsq/pe_set.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <sstream>

namespace bsq {

void require_same_q(const pe_set& a, const pe_set& b) {
    if (a.ctx.q != b.ctx.q)
        throw q_mismatch("operands built for different q: " + std::to_string(a.ctx.q) + " vs " +
                         std::to_string(b.ctx.q));
}

pe_set pe_universe(const group_context& ctx) {
    pe_alphabet pa(ctx.q);
    nfa a(pa.size());
    state_id start = a.add_state();
    state_id sign_pos = a.add_state();
    state_id sign_neg = a.add_state();
    a.initials.push_back(start);
    a.add_edge(start, pe_alphabet::sign(false), sign_pos);
    a.add_edge(start, pe_alphabet::sign(true), sign_neg);

    // Digit states carry (negative, radix seen, cursor seen, nonzero seen,
    // last digit was a bare zero); the canonical language forbids a bare-zero
    // first digit, a bare-zero last digit, duplicate markers, and '-' on zero.
    std::map<std::array<int, 5>, state_id> states;
    std::vector<std::array<int, 5>> work;
    auto intern = [&](std::array<int, 5> key) {
        auto it = states.find(key);
        if (it != states.end()) return it->second;
        state_id s = a.add_state();
        states.emplace(key, s);
        work.push_back(key);
        return s;
    };
    for (int neg = 0; neg < 2; ++neg)
        for (int d = 0; d < ctx.q; ++d)
            for (int rm = 0; rm < 2; ++rm)
                for (int cm = 0; cm < 2; ++cm) {
                    if (d == 0 && !rm && !cm) continue;
                    state_id to = intern({neg, rm, cm, d > 0 ? 1 : 0, 0});
                    a.add_edge(neg ? sign_neg : sign_pos, pa.digit(d, rm, cm), to);
                }
    for (std::size_t i = 0; i < work.size(); ++i) {
        std::array<int, 5> key = work[i];
        state_id from = states[key];
        for (int d = 0; d < ctx.q; ++d)
            for (int rm = 0; rm < 2; ++rm)
                for (int cm = 0; cm < 2; ++cm) {
                    if ((key[1] && rm) || (key[2] && cm)) continue;
                    std::array<int, 5> nk{key[0], key[1] | rm, key[2] | cm,
                                          key[3] | (d > 0 ? 1 : 0),
                                          (d == 0 && !rm && !cm) ? 1 : 0};
                    a.add_edge(from, pa.digit(d, rm, cm), intern(nk));
                }
    }
    for (const auto& [key, s] : states)
        if (key[1] && key[2] && !key[4] && !(key[0] && !key[3])) a.finals.push_back(s);
    return {ctx, minimal(a)};
}

pe_set pe_empty_set(const group_context& ctx) {
    dfa d;
    d.alphabet = pe_alphabet(ctx.q).size();
    d.num_states = 1;
    d.initial = 0;
    d.next.assign(d.alphabet, 0);
    d.accepting.assign(1, 0);
    return {ctx, d};
}

pe_set pe_finite(const group_context& ctx, const std::vector<group_element>& elems) {
    std::vector<std::vector<sym_id>> words;
    for (const auto& g : elems) words.push_back(pe_symbols(ctx, pe_encode(ctx, g)));
    return {ctx, minimize(dfa_from_words(pe_alphabet(ctx.q).size(), words))};
}

pe_set pe_singleton(const group_context& ctx, const group_element& g) {
    return pe_finite(ctx, {g});
}

bool pe_member(const pe_set& s, const group_element& g) {
    return s.machine.accepts(pe_symbols(s.ctx, pe_encode(s.ctx, g)));
}

bool pe_is_empty(const pe_set& s) { return is_empty_lang(s.machine); }

bool pe_subset(const pe_set& a, const pe_set& b) {
    require_same_q(a, b);
    return subset_of(a.machine, b.machine);
}

bool pe_equal(const pe_set& a, const pe_set& b) {
    require_same_q(a, b);
    return equivalent(a.machine, b.machine);
}

pe_set pe_union(const pe_set& a, const pe_set& b) {
    require_same_q(a, b);
    return {a.ctx, minimize(unite(a.machine, b.machine))};
}

pe_set pe_intersection(const pe_set& a, const pe_set& b) {
    require_same_q(a, b);
    return {a.ctx, minimize(intersect(a.machine, b.machine))};
}

pe_set pe_difference(const pe_set& a, const pe_set& b) {
    require_same_q(a, b);
    return {a.ctx, minimize(difference(a.machine, b.machine))};
}

pe_set pe_complement(const pe_set& a) {
    return {a.ctx, minimize(complement_in(pe_universe(a.ctx).machine, a.machine))};
}

std::vector<group_element> pe_elements(const pe_set& s, std::size_t max_tokens,
                                       std::size_t count_budget) {
    std::vector<group_element> out;
    for (const auto& w : enumerate_words(s.machine, max_tokens, count_budget))
        out.push_back(pe_decode(s.ctx, pe_from_symbols(s.ctx, w)));
    return out;
}

std::string pe_dump(const pe_set& s) {
    std::ostringstream os;
    os << "pe q=" << s.ctx.q << "\n" << dump_dfa(s.machine, pe_alphabet(s.ctx.q).names());
    return os.str();
}

pe_set pe_parse(const std::string& text) {
    auto nl = text.find('\n');
    if (nl == std::string::npos) throw parse_error("pe_parse: missing machine after header");
    std::istringstream hs(text.substr(0, nl));
    std::string kind, qkv;
    hs >> kind >> qkv;
    if (kind != "pe" || qkv.rfind("q=", 0) != 0)
        throw parse_error("pe_parse: expected header `pe q=<int>`");
    int q = 0;
    try {
        q = std::stoi(qkv.substr(2));
    } catch (const std::exception&) {
        throw parse_error("pe_parse: bad q value " + qkv);
    }
    group_context ctx(q);
    auto [m, names] = parse_dfa(text.substr(nl + 1));
    if (m.alphabet != pe_alphabet(q).size())
        throw parse_error("pe_parse: alphabet size does not match q");
    return {ctx, std::move(m)};
}

std::string signed_alphabet::name(sym_id x) const {
    if (is_blank(x)) return "_";
    std::string s = std::to_string(value(x));
    if (has_radix(x)) s += 'r';
    if (has_cursor(x)) s += 'c';
    return s;
}

std::vector<std::string> signed_alphabet::names() const {
    std::vector<std::string> out;
    for (sym_id x = 0; x < size(); ++x) out.push_back(name(x));
    return out;
}

dfa signed_of_pe(const pe_set& s, const signed_alphabet& sa) {
    if (sa.max_digit < s.ctx.q - 1)
        throw std::invalid_argument("signed_of_pe: alphabet cannot hold base-q digits");
    pe_alphabet pa(s.ctx.q);
    const dfa& m = s.machine;
    nfa out(sa.size());
    for (state_id i = 0; i < 2 * m.num_states; ++i) out.add_state();
    for (int neg = 0; neg < 2; ++neg)
        out.initials.push_back(m.step(m.initial, pe_alphabet::sign(neg != 0)) * 2 + neg);
    for (state_id u = 0; u < m.num_states; ++u)
        for (int neg = 0; neg < 2; ++neg) {
            if (m.accepting[u]) out.finals.push_back(u * 2 + neg);
            for (int d = 0; d < s.ctx.q; ++d)
                for (int rm = 0; rm < 2; ++rm)
                    for (int cm = 0; cm < 2; ++cm) {
                        state_id v = m.step(u, pa.digit(d, rm, cm));
                        out.add_edge(u * 2 + neg, sa.digit(neg ? -d : d, rm, cm), v * 2 + neg);
                    }
        }
    return minimal(out);
}

dfa signed_universe(const signed_alphabet& sa) {
    nfa a(sa.size());
    for (int i = 0; i < 4; ++i) a.add_state();
    a.initials.push_back(0);
    a.finals.push_back(3);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
            for (int d = -sa.max_digit; d <= sa.max_digit; ++d)
                for (int rm = 0; rm < 2; ++rm)
                    for (int cm = 0; cm < 2; ++cm) {
                        if ((r && rm) || (c && cm)) continue;
                        a.add_edge(r * 2 + c, sa.digit(d, rm, cm), (r | rm) * 2 + (c | cm));
                    }
    return minimal(a);
}

dfa blank_padded(const dfa& a, const signed_alphabet& sa) {
    nfa out = to_nfa(a);
    state_id pre = out.add_state();
    state_id post = out.add_state();
    out.add_edge(pre, sa.blank(), pre);
    out.add_edge(post, sa.blank(), post);
    for (state_id i : out.initials) out.add_eps(pre, i);
    for (state_id f : out.finals) out.add_eps(f, post);
    out.initials = {pre};
    out.finals.push_back(post);
    return minimal(out);
}

pe_set signed_to_pe_set(const group_context& ctx, const dfa& a, const signed_alphabet& sa,
                        std::size_t state_budget) {
    if (a.alphabet != sa.size())
        throw std::invalid_argument("signed_to_pe_set: input not over the given signed alphabet");
    const dfa m = minimize(a);
    pe_alphabet pa(ctx.q);
    const int q = ctx.q;
    const int bound = (sa.max_digit + 2 * q - 3) / (q - 1);

    // The value of the input word is re-expanded as sign * digit word at the
    // same positions; delta tracks the discrepancy of the processed columns,
    // scaled to the current column.  Surplus input columns at the msd end or
    // the tail are consumed silently, and missing msd columns are emitted
    // against a still-unstarted input, so the output span is free on both
    // sides that matter (an output never needs to reach below the input).
    enum mode_t : std::uint32_t { m_pre_in, m_pre_out, m_mid, m_post };
    nfa out(pa.size());
    state_id start = out.add_state();
    out.initials.push_back(start);
    std::map<std::array<std::uint32_t, 4>, state_id> index;
    std::vector<std::array<std::uint32_t, 4>> work;
    auto intern = [&](std::uint32_t mode, state_id u, long delta,
                      std::uint32_t neg) -> state_id {
        if (delta < -bound || delta > bound) return UINT32_MAX;
        std::array<std::uint32_t, 4> key{mode, u, static_cast<std::uint32_t>(delta + bound), neg};
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        if (index.size() >= state_budget)
            throw budget_exceeded("signed_to_pe_set: state budget exceeded");
        state_id s = out.add_state();
        index.emplace(key, s);
        work.push_back(key);
        return s;
    };
    for (std::uint32_t neg = 0; neg < 2; ++neg) {
        out.add_edge(start, pe_alphabet::sign(neg != 0), intern(m_pre_in, m.initial, 0, neg));
        out.add_edge(start, pe_alphabet::sign(neg != 0), intern(m_pre_out, m.initial, 0, neg));
    }
    for (std::size_t i = 0; i < work.size(); ++i) {
        auto key = work[i];
        state_id sid = index[key];
        auto mode = key[0];
        state_id u = key[1];
        long delta = static_cast<long>(key[2]) - bound;
        bool neg = key[3] != 0;
        auto sgn = [&](int d) { return neg ? -d : d; };
        if (mode == m_pre_in || mode == m_post) {
            if (mode == m_pre_in) out.add_eps(sid, intern(m_mid, u, delta, key[3]));
            for (sym_id x = 1; x < sa.size(); ++x) {
                state_id t = intern(mode, m.step(u, x), q * delta + sa.value(x), key[3]);
                if (t != UINT32_MAX) out.add_eps(sid, t);
            }
            if (mode == m_post && delta == 0 && m.accepting[u]) out.finals.push_back(sid);
        } else if (mode == m_pre_out) {
            out.add_eps(sid, intern(m_mid, u, delta, key[3]));
            for (int d = 0; d < q; ++d) {
                state_id t = intern(m_pre_out, u, q * delta - sgn(d), key[3]);
                if (t != UINT32_MAX) out.add_edge(sid, pa.digit(d, false, false), t);
            }
        } else {
            out.add_eps(sid, intern(m_post, u, delta, key[3]));
            for (sym_id x = 1; x < sa.size(); ++x) {
                state_id v = m.step(u, x);
                for (int d = 0; d < q; ++d) {
                    state_id t = intern(m_mid, v, q * delta + sa.value(x) - sgn(d), key[3]);
                    if (t != UINT32_MAX)
                        out.add_edge(sid, pa.digit(d, sa.has_radix(x), sa.has_cursor(x)), t);
                }
            }
        }
    }
    dfa det = determinize(trim(out), state_budget);
    return {ctx, minimize(intersect(det, pe_universe(ctx).machine))};
}

dfa sum_triple_dfa(int q, int max_digit) {
    sym_id per = 2 * static_cast<sym_id>(max_digit) + 1;
    tuple_alphabet tr{{per, per, per}};
    int bound = (3 * max_digit + q - 2) / (q - 1);
    dfa out;
    out.alphabet = tr.size();
    out.num_states = static_cast<state_id>(2 * bound + 2);
    out.initial = static_cast<state_id>(bound);
    out.accepting.assign(out.num_states, 0);
    out.accepting[bound] = 1;
    state_id dead = out.num_states - 1;
    out.next.assign(std::size_t{out.num_states} * out.alphabet, dead);
    for (int dl = -bound; dl <= bound; ++dl)
        for (sym_id sym = 0; sym < out.alphabet; ++sym) {
            auto parts = tr.decode(sym);
            long x = static_cast<long>(parts[0]) - max_digit;
            long y = static_cast<long>(parts[1]) - max_digit;
            long z = static_cast<long>(parts[2]) - max_digit;
            long nd = q * static_cast<long>(dl) + x + y - z;
            if (nd >= -bound && nd <= bound)
                out.next[std::size_t(dl + bound) * out.alphabet + sym] =
                    static_cast<state_id>(nd + bound);
        }
    return out;
}

namespace {

/** States that can still reach an accepting state; transitions leaving the
 *  set are dead and the lazy products below skip them. */
std::vector<char> co_reachable(const dfa& m) {
    std::vector<std::vector<state_id>> rev(m.num_states);
    for (state_id u = 0; u < m.num_states; ++u)
        for (sym_id x = 0; x < m.alphabet; ++x) rev[m.step(u, x)].push_back(u);
    std::vector<char> ok(m.num_states, 0);
    std::vector<state_id> stack;
    for (state_id u = 0; u < m.num_states; ++u)
        if (m.accepting[u]) {
            ok[u] = 1;
            stack.push_back(u);
        }
    while (!stack.empty()) {
        state_id u = stack.back();
        stack.pop_back();
        for (state_id p : rev[u])
            if (!ok[p]) {
                ok[p] = 1;
                stack.push_back(p);
            }
    }
    return ok;
}

/** Columnwise x + y = z over three aligned signed tracks, built lazily as the
 *  reachable (state, state, state, carry) product.  Marks are forced per
 *  column: the middle track's radix sits on the first track's cursor, and the
 *  sum track copies the first track's radix and the middle track's cursor.
 *  The word read is the emitted track's, its blank columns as eps moves. */
nfa aligned_sum_nfa(int q, const signed_alphabet& sa, const dfa& m0, const dfa& m1,
                    const dfa& m2, std::size_t emit, std::size_t state_budget) {
    const int bound = (3 * sa.max_digit + q - 2) / (q - 1);
    std::vector<char> ok0 = co_reachable(m0), ok1 = co_reachable(m1), ok2 = co_reachable(m2);
    nfa out(sa.size());
    std::map<std::array<std::uint32_t, 4>, state_id> index;
    std::vector<std::array<std::uint32_t, 4>> work;
    auto intern = [&](state_id u0, state_id u1, state_id u2, long delta) -> state_id {
        if (delta < -bound || delta > bound) return UINT32_MAX;
        std::array<std::uint32_t, 4> key{u0, u1, u2, static_cast<std::uint32_t>(delta + bound)};
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        if (index.size() >= state_budget)
            throw budget_exceeded("aligned_sum_nfa: state budget exceeded");
        state_id s = out.add_state();
        index.emplace(key, s);
        work.push_back(key);
        return s;
    };
    out.initials.push_back(intern(m0.initial, m1.initial, m2.initial, 0));
    for (std::size_t i = 0; i < work.size(); ++i) {
        auto key = work[i];
        state_id sid = index[key];
        state_id u0 = key[0], u1 = key[1], u2 = key[2];
        long delta = static_cast<long>(key[3]) - bound;
        if (m0.accepting[u0] && m1.accepting[u1] && m2.accepting[u2] && delta == 0)
            out.finals.push_back(sid);
        for (sym_id x0 = 0; x0 < sa.size(); ++x0) {
            state_id v0 = m0.step(u0, x0);
            if (!ok0[v0]) continue;
            for (sym_id x1 = 0; x1 < sa.size(); ++x1) {
                if (sa.has_radix(x1) != sa.has_cursor(x0)) continue;
                state_id v1 = m1.step(u1, x1);
                if (!ok1[v1]) continue;
                bool r2 = sa.has_radix(x0), c2 = sa.has_cursor(x1);
                long base = q * delta + sa.value(x0) + sa.value(x1);
                for (int d2 = -sa.max_digit - 1; d2 <= sa.max_digit; ++d2) {
                    sym_id x2;
                    if (d2 < -sa.max_digit) {
                        if (r2 || c2) continue;
                        x2 = sa.blank();
                    } else {
                        x2 = sa.digit(d2, r2, c2);
                    }
                    state_id v2 = m2.step(u2, x2);
                    if (!ok2[v2]) continue;
                    state_id t = intern(v0, v1, v2, base - sa.value(x2));
                    if (t == UINT32_MAX) continue;
                    sym_id e = emit == 0 ? x0 : emit == 1 ? x1 : x2;
                    if (sa.is_blank(e)) out.add_eps(sid, t);
                    else out.add_edge(sid, e, t);
                }
            }
        }
    }
    return out;
}

/** Columnwise y = x + step at the cursor column over two aligned tracks with
 *  equal marks, lazily as above; the second track is the one read out. */
nfa aligned_shift_nfa(int q, const signed_alphabet& sa, const dfa& m0, const dfa& m1, int step,
                      std::size_t state_budget) {
    const int bound = 3;
    std::vector<char> ok0 = co_reachable(m0), ok1 = co_reachable(m1);
    nfa out(sa.size());
    std::map<std::array<std::uint32_t, 3>, state_id> index;
    std::vector<std::array<std::uint32_t, 3>> work;
    auto intern = [&](state_id u0, state_id u1, long delta) -> state_id {
        if (delta < -bound || delta > bound) return UINT32_MAX;
        std::array<std::uint32_t, 3> key{u0, u1, static_cast<std::uint32_t>(delta + bound)};
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        if (index.size() >= state_budget)
            throw budget_exceeded("aligned_shift_nfa: state budget exceeded");
        state_id s = out.add_state();
        index.emplace(key, s);
        work.push_back(key);
        return s;
    };
    out.initials.push_back(intern(m0.initial, m1.initial, 0));
    for (std::size_t i = 0; i < work.size(); ++i) {
        auto key = work[i];
        state_id sid = index[key];
        state_id u0 = key[0], u1 = key[1];
        long delta = static_cast<long>(key[2]) - bound;
        if (m0.accepting[u0] && m1.accepting[u1] && delta == 0) out.finals.push_back(sid);
        for (sym_id x0 = 0; x0 < sa.size(); ++x0) {
            state_id v0 = m0.step(u0, x0);
            if (!ok0[v0]) continue;
            bool r1 = sa.has_radix(x0), c1 = sa.has_cursor(x0);
            long base = q * delta + sa.value(x0) + (c1 ? step : 0);
            for (int d1 = -sa.max_digit - 1; d1 <= sa.max_digit; ++d1) {
                sym_id x1;
                if (d1 < -sa.max_digit) {
                    if (r1 || c1) continue;
                    x1 = sa.blank();
                } else {
                    x1 = sa.digit(d1, r1, c1);
                }
                state_id v1 = m1.step(u1, x1);
                if (!ok1[v1]) continue;
                state_id t = intern(v0, v1, base - sa.value(x1));
                if (t == UINT32_MAX) continue;
                if (sa.is_blank(x1)) out.add_eps(sid, t);
                else out.add_edge(sid, x1, t);
            }
        }
    }
    return out;
}

} // namespace

pe_set pe_product(const pe_set& a, const pe_set& b, std::size_t state_budget) {
    require_same_q(a, b);
    const group_context& ctx = a.ctx;
    signed_alphabet sa(ctx.q - 1);
    // The right factor is laid down with its radix on the left factor's
    // cursor column, so the columnwise sum realizes r + q^m r' and the
    // result's cursor lands on the right factor's cursor column.
    dfa m0 = blank_padded(signed_of_pe(a, sa), sa);
    dfa m1 = blank_padded(signed_of_pe(b, sa), sa);
    dfa m2 = blank_padded(signed_universe(sa), sa);
    dfa z = minimal_reversal(trim(aligned_sum_nfa(ctx.q, sa, m0, m1, m2, 2, state_budget)),
                             state_budget);
    return signed_to_pe_set(ctx, z, sa, state_budget);
}

pe_set pe_inverse_set(const pe_set& a, std::size_t state_budget) {
    const group_context& ctx = a.ctx;
    signed_alphabet sa(ctx.q - 1);
    dfa m0 = blank_padded(signed_of_pe(a, sa), sa);
    dfa m1 = blank_padded(signed_universe(sa), sa);
    dfa m2 = blank_padded(signed_of_pe(pe_singleton(ctx, identity()), sa), sa);
    dfa v = minimal_reversal(trim(aligned_sum_nfa(ctx.q, sa, m0, m1, m2, 1, state_budget)),
                             state_budget);
    return signed_to_pe_set(ctx, v, sa, state_budget);
}

namespace {

/** g -> g t as word surgery: the cursor marker moves one digit towards the
 *  msd; a fresh 0c column is prepended when the marker is already on the
 *  first digit, and the last digit is dropped if losing the marker leaves it
 *  a bare zero. */
pe_set multiply_by_t(const pe_set& s, std::size_t state_budget) {
    const group_context& ctx = s.ctx;
    pe_alphabet pa(ctx.q);
    const dfa& m = s.machine;
    nfa out(pa.size());
    state_id start = out.add_state();
    state_id fin = out.add_state();
    out.initials.push_back(start);
    out.finals.push_back(fin);
    // key: (1, u, 0, 0, 0, 0) for the no-buffer state, (2, u, d, r, bc, e)
    // once one input digit is buffered; e records that the cursor marker has
    // been emitted.
    std::map<std::array<std::uint32_t, 6>, state_id> index;
    std::vector<std::array<std::uint32_t, 6>> work;
    auto intern = [&](std::array<std::uint32_t, 6> key) {
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        state_id t = out.add_state();
        index.emplace(key, t);
        work.push_back(key);
        return t;
    };
    for (int neg = 0; neg < 2; ++neg) {
        sym_id sg = pe_alphabet::sign(neg != 0);
        out.add_edge(start, sg, intern({1, m.step(m.initial, sg), 0, 0, 0, 0}));
    }
    for (std::size_t i = 0; i < work.size(); ++i) {
        auto key = work[i];
        state_id sid = index[key];
        state_id u = key[1];
        if (key[0] == 1) {
            for (int d = 0; d < ctx.q; ++d)
                for (std::uint32_t rm = 0; rm < 2; ++rm)
                    for (std::uint32_t cm = 0; cm < 2; ++cm)
                        out.add_eps(sid, intern({2, m.step(u, pa.digit(d, rm, cm)),
                                                 static_cast<std::uint32_t>(d), rm, cm, 0}));
            continue;
        }
        std::uint32_t d = key[2], r = key[3], bc = key[4], e = key[5];
        if (bc && !e)
            out.add_edge(sid, pa.digit(0, false, true), intern({2, u, d, r, 0, 1}));
        for (int d2 = 0; d2 < ctx.q; ++d2)
            for (std::uint32_t rm = 0; rm < 2; ++rm)
                for (std::uint32_t cm = 0; cm < 2; ++cm)
                    out.add_edge(sid, pa.digit(static_cast<int>(d), r, cm),
                                 intern({2, m.step(u, pa.digit(d2, rm, cm)),
                                         static_cast<std::uint32_t>(d2), rm, cm, e | cm}));
        if (e && m.accepting[u]) out.add_edge(sid, pa.digit(static_cast<int>(d), r, false), fin);
        if (e && bc && d == 0 && !r && m.accepting[u]) out.add_eps(sid, fin);
    }
    dfa det = determinize(trim(out), state_budget);
    return {ctx, minimize(intersect(det, pe_universe(ctx).machine))};
}

/** g -> g t^-1: the cursor marker moves one digit towards the lsd, appending
 *  a fresh 0c column past the end or dropping a bare-zero first digit. */
pe_set multiply_by_t_inv(const pe_set& s, std::size_t state_budget) {
    const group_context& ctx = s.ctx;
    pe_alphabet pa(ctx.q);
    const dfa& m = s.machine;
    nfa out(pa.size());
    state_id start = out.add_state();
    state_id fin = out.add_state();
    out.initials.push_back(start);
    out.finals.push_back(fin);
    // key: (u, pending cursor marker, marker emitted, at first digit)
    std::map<std::array<std::uint32_t, 4>, state_id> index;
    std::vector<std::array<std::uint32_t, 4>> work;
    auto intern = [&](std::array<std::uint32_t, 4> key) {
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        state_id t = out.add_state();
        index.emplace(key, t);
        work.push_back(key);
        return t;
    };
    for (int neg = 0; neg < 2; ++neg) {
        sym_id sg = pe_alphabet::sign(neg != 0);
        out.add_edge(start, sg, intern({m.step(m.initial, sg), 0, 0, 1}));
    }
    for (std::size_t i = 0; i < work.size(); ++i) {
        auto key = work[i];
        state_id sid = index[key];
        state_id u = key[0];
        std::uint32_t pc = key[1], e = key[2], first = key[3];
        if (first)
            out.add_eps(sid, intern({m.step(u, pa.digit(0, false, true)), 1, 0, 0}));
        for (int d = 0; d < ctx.q; ++d)
            for (std::uint32_t rm = 0; rm < 2; ++rm)
                for (std::uint32_t cm = 0; cm < 2; ++cm)
                    out.add_edge(sid, pa.digit(d, rm, pc),
                                 intern({m.step(u, pa.digit(d, rm, cm)), cm, e | pc, 0}));
        if (!pc && e && m.accepting[u]) out.add_eps(sid, fin);
        if (pc && m.accepting[u]) out.add_edge(sid, pa.digit(0, false, true), fin);
    }
    dfa det = determinize(trim(out), state_budget);
    return {ctx, minimize(intersect(det, pe_universe(ctx).machine))};
}

/** g -> g a^(+-1) as a two-track relation: same markers columnwise, and the
 *  output value is the input value plus q^cursor times the step. */
pe_set multiply_by_a(const pe_set& s, int step, std::size_t state_budget) {
    const group_context& ctx = s.ctx;
    signed_alphabet sa(ctx.q - 1);
    dfa m0 = blank_padded(signed_of_pe(s, sa), sa);
    dfa m1 = blank_padded(signed_universe(sa), sa);
    dfa v = minimal_reversal(trim(aligned_shift_nfa(ctx.q, sa, m0, m1, step, state_budget)),
                             state_budget);
    return signed_to_pe_set(ctx, v, sa, state_budget);
}

} // namespace

pe_set pe_right_multiply(const pe_set& s, generator g, std::size_t state_budget) {
    switch (g) {
        case generator::t: return multiply_by_t(s, state_budget);
        case generator::t_inv: return multiply_by_t_inv(s, state_budget);
        case generator::a: return multiply_by_a(s, 1, state_budget);
        case generator::a_inv: return multiply_by_a(s, -1, state_budget);
    }
    throw std::invalid_argument("pe_right_multiply: bad generator");
}

namespace {

pe_set integer_shape(const group_context& ctx, bool pos, bool neg) {
    pe_alphabet pa(ctx.q);
    nfa a(pa.size());
    state_id pre = a.add_state();
    state_id mid = a.add_state();
    state_id acc = a.add_state();
    a.initials.push_back(pre);
    a.finals.push_back(acc);
    if (pos) a.add_edge(pre, pe_alphabet::sign(false), mid);
    if (neg) a.add_edge(pre, pe_alphabet::sign(true), mid);
    for (int d = 0; d < ctx.q; ++d) {
        a.add_edge(mid, pa.digit(d, false, false), mid);
        a.add_edge(mid, pa.digit(d, true, true), acc);
    }
    return pe_intersection({ctx, minimal(a)}, pe_universe(ctx));
}

} // namespace

pe_set pe_integers(const group_context& ctx) { return integer_shape(ctx, true, true); }

pe_set pe_int_nonneg(const group_context& ctx) { return integer_shape(ctx, true, false); }

pe_set pe_int_nonpos(const group_context& ctx) {
    return pe_union(integer_shape(ctx, false, true), pe_singleton(ctx, identity()));
}

pe_set pe_int_divisible(const group_context& ctx, const big_int& d) {
    if (d <= 0) throw std::invalid_argument("pe_int_divisible: modulus must be positive");
    if (!d.fits_ulong_p() || d.get_ui() > 1'000'000)
        throw budget_exceeded("pe_int_divisible: modulus too large");
    unsigned long dm = d.get_ui();
    pe_alphabet pa(ctx.q);
    nfa a(pa.size());
    state_id pre = a.add_state();
    std::vector<state_id> res(dm);
    for (auto& st : res) st = a.add_state();
    state_id acc = a.add_state();
    a.initials.push_back(pre);
    a.finals.push_back(acc);
    a.add_edge(pre, pe_alphabet::sign(false), res[0]);
    a.add_edge(pre, pe_alphabet::sign(true), res[0]);
    for (unsigned long r = 0; r < dm; ++r)
        for (int dig = 0; dig < ctx.q; ++dig) {
            unsigned long nr = (r * static_cast<unsigned long>(ctx.q) +
                                static_cast<unsigned long>(dig)) % dm;
            a.add_edge(res[r], pa.digit(dig, false, false), res[nr]);
            if (nr == 0) a.add_edge(res[r], pa.digit(dig, true, true), acc);
        }
    return pe_intersection({ctx, minimal(a)}, pe_universe(ctx));
}

pe_set pe_int_greater(const group_context& ctx, const big_int& bound) {
    if (bound < 0) throw std::invalid_argument("pe_int_greater: bound must be >= 0");
    std::vector<int> f;
    for (big_int b = bound; b > 0; b /= ctx.q)
        f.push_back(static_cast<int>(mpz_fdiv_ui(b.get_mpz_t(), ctx.q)));
    if (f.empty()) f.push_back(0);
    std::reverse(f.begin(), f.end());
    std::size_t mlen = f.size();

    pe_alphabet pa(ctx.q);
    nfa a(pa.size());
    state_id pre = a.add_state();
    state_id acc = a.add_state();
    state_id ovf = a.add_state();
    a.initials.push_back(pre);
    a.finals.push_back(acc);
    // cmp[j][rel]: j digits consumed, rel 0 = equal so far, 1 = greater,
    // 2 = less; length beats digit order, so only full-length comparisons and
    // overflowing lengths accept.
    std::vector<std::array<state_id, 3>> cmp(mlen);
    for (auto& row : cmp)
        for (auto& st : row) st = a.add_state();
    a.add_edge(pre, pe_alphabet::sign(false), cmp[0][0]);
    auto rel_after = [&](int rel, std::size_t j, int dig) {
        if (rel != 0) return rel;
        return dig > f[j] ? 1 : dig < f[j] ? 2 : 0;
    };
    for (std::size_t j = 0; j < mlen; ++j)
        for (int rel = 0; rel < 3; ++rel)
            for (int dig = 0; dig < ctx.q; ++dig) {
                int nrel = rel_after(rel, j, dig);
                if (j + 1 < mlen)
                    a.add_edge(cmp[j][rel], pa.digit(dig, false, false), cmp[j + 1][nrel]);
                else
                    a.add_edge(cmp[j][rel], pa.digit(dig, false, false), ovf);
                if (j + 1 == mlen && nrel == 1)
                    a.add_edge(cmp[j][rel], pa.digit(dig, true, true), acc);
            }
    for (int dig = 0; dig < ctx.q; ++dig) {
        a.add_edge(ovf, pa.digit(dig, false, false), ovf);
        a.add_edge(ovf, pa.digit(dig, true, true), acc);
    }
    return pe_intersection({ctx, minimal(a)}, pe_universe(ctx));
}

pe_set pe_int_finite(const group_context& ctx, const std::vector<big_int>& values) {
    std::vector<group_element> elems;
    for (const auto& v : values) elems.push_back(normalized(ctx, v, 0, 0));
    return pe_finite(ctx, elems);
}

pe_set pe_power_diff(const group_context& ctx, std::size_t k, bool inverted) {
    if (k == 0) throw std::invalid_argument("pe_power_diff: k must be positive");
    pe_alphabet pa(ctx.q);
    int Q = ctx.q - 1;
    sym_id max_um = pa.digit(Q, false, false);
    sym_id max_rc = pa.digit(Q, true, true);
    sym_id zero_um = pa.digit(0, false, false);
    sym_id zero_rc = pa.digit(0, true, true);

    nfa a(pa.size());
    state_id pre = a.add_state();
    state_id sgn = a.add_state();
    state_id acc = a.add_state();
    a.initials.push_back(pre);
    a.finals.push_back(acc);
    a.add_edge(pre, pe_alphabet::sign(!inverted), sgn);

    // chainq[i]: i + 1 leading unmarked max digits consumed
    std::vector<state_id> chainq(k);
    for (auto& st : chainq) st = a.add_state();
    a.add_edge(sgn, max_um, chainq[0]);
    for (std::size_t i = 0; i + 1 < k; ++i) a.add_edge(chainq[i], max_um, chainq[i + 1]);
    auto after = [&](std::size_t i) { return i == 0 ? sgn : chainq[i - 1]; };

    // exponent >= 1: the whole block sits above the radix
    state_id z1 = a.add_state();
    a.add_edge(chainq[k - 1], zero_um, z1);
    a.add_edge(z1, zero_um, z1);
    a.add_edge(chainq[k - 1], zero_rc, acc);
    a.add_edge(z1, zero_rc, acc);
    // exponent 0: the block ends on the radix digit
    a.add_edge(after(k - 1), max_rc, acc);
    // exponents in (-k, 0): the radix digit is inside the block, t digits
    // of it below the radix
    std::vector<state_id> tail(k);
    for (std::size_t t = 1; t < k; ++t) {
        tail[t] = a.add_state();
        a.add_edge(after(k - 1 - t), max_rc, tail[t]);
        a.add_edge(tail[t], max_um, t == 1 ? acc : tail[t - 1]);
    }
    // exponent <= -k: the whole block sits below the radix
    state_id z2 = a.add_state();
    a.add_edge(sgn, zero_rc, z2);
    a.add_edge(z2, zero_um, z2);
    if (k == 1) {
        a.add_edge(z2, max_um, acc);
    } else {
        std::vector<state_id> below(k);
        for (std::size_t j = 1; j < k; ++j) below[j] = a.add_state();
        a.add_edge(z2, max_um, below[k - 1]);
        for (std::size_t j = k - 1; j >= 1; --j)
            a.add_edge(below[j], max_um, j == 1 ? acc : below[j - 1]);
    }
    return pe_intersection({ctx, minimal(a)}, pe_universe(ctx));
}

} // namespace bsq
