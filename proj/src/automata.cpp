#include "bsq/automata.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <queue>
#include <sstream>
#include <unordered_map>

namespace bsq {

namespace {

struct vec_hash {
    std::size_t operator()(const std::vector<state_id>& v) const {
        std::size_t h = v.size();
        for (state_id x : v) h = h * 1000003u + x + 0x9e3779b9u;
        return h;
    }
};

} // namespace

dfa determinize(const nfa& a, std::size_t state_budget) {
    dfa d;
    d.alphabet = a.alphabet;
    std::unordered_map<std::vector<state_id>, state_id, vec_hash> index;
    std::vector<std::vector<state_id>> sets;
    std::vector<bool> is_final(a.size(), false);
    for (state_id f : a.finals) is_final[f] = true;
    bool use_eps = false;
    for (const auto& e : a.eps) use_eps = use_eps || !e.empty();

    // Epoch-marked closure: no per-call allocation or full-state scans.
    std::vector<std::uint32_t> mark(a.size(), 0);
    std::uint32_t epoch = 0;
    auto eps_close = [&](std::vector<state_id>& set) {
        ++epoch;
        for (state_id s : set) mark[s] = epoch;
        for (std::size_t i = 0; i < set.size(); ++i)
            for (state_id t : a.eps[set[i]])
                if (mark[t] != epoch) {
                    mark[t] = epoch;
                    set.push_back(t);
                }
    };

    auto intern = [&](std::vector<state_id> set) {
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
        auto it = index.find(set);
        if (it != index.end()) return it->second;
        if (sets.size() >= state_budget)
            throw budget_exceeded("determinize: state budget exceeded");
        state_id id = static_cast<state_id>(sets.size());
        index.emplace(set, id);
        sets.push_back(std::move(set));
        bool acc = false;
        for (state_id s : sets.back()) acc = acc || is_final[s];
        d.accepting.push_back(acc ? 1 : 0);
        return id;
    };

    std::vector<state_id> init(a.initials.begin(), a.initials.end());
    if (use_eps) eps_close(init);
    d.initial = intern(std::move(init));

    std::vector<std::pair<sym_id, state_id>> moves;
    for (state_id cur = 0; cur < sets.size(); ++cur) {
        moves.clear();
        for (state_id s : sets[cur])
            for (auto [x, t] : a.edges[s]) moves.emplace_back(x, t);
        std::sort(moves.begin(), moves.end());
        d.next.resize(std::size_t{cur + 1} * d.alphabet, 0);
        std::size_t i = 0;
        for (sym_id x = 0; x < d.alphabet; ++x) {
            std::vector<state_id> tgt;
            while (i < moves.size() && moves[i].first == x) {
                tgt.push_back(moves[i].second);
                ++i;
            }
            if (use_eps) eps_close(tgt);
            state_id nid = intern(std::move(tgt));
            d.next[std::size_t{cur} * d.alphabet + x] = nid;
            d.next.resize(std::size_t{sets.size()} * d.alphabet, 0);
        }
    }
    d.num_states = static_cast<state_id>(sets.size());
    d.next.resize(std::size_t{d.num_states} * d.alphabet, 0);
    return d;
}

dfa minimize(const dfa& a) {
    // Reachability restriction, then Moore partition refinement, then a
    // breadth-first renumbering so equal languages yield identical tables.
    std::vector<state_id> order;
    std::vector<state_id> remap(a.num_states, UINT32_MAX);
    order.push_back(a.initial);
    remap[a.initial] = 0;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (sym_id x = 0; x < a.alphabet; ++x) {
            state_id t = a.step(order[i], x);
            if (remap[t] == UINT32_MAX) {
                remap[t] = static_cast<state_id>(order.size());
                order.push_back(t);
            }
        }

    std::size_t n = order.size();

    // Symbols with identical transition columns cannot distinguish states, so
    // refine over one representative per column class; tuple alphabets shrink
    // from thousands of symbols to a handful.
    std::vector<sym_id> reps;
    {
        std::unordered_map<std::string, sym_id> col_ids;
        std::string col;
        for (sym_id x = 0; x < a.alphabet; ++x) {
            col.clear();
            for (std::size_t i = 0; i < n; ++i) {
                std::uint32_t t = remap[a.step(order[i], x)];
                col.append(reinterpret_cast<const char*>(&t), sizeof(std::uint32_t));
            }
            if (col_ids.emplace(col, x).second) reps.push_back(x);
        }
    }

    std::vector<std::uint32_t> cls(n);
    for (std::size_t i = 0; i < n; ++i) cls[i] = a.accepting[order[i]] ? 1 : 0;
    std::size_t num_cls = 2;
    for (;;) {
        std::unordered_map<std::string, std::uint32_t> sig_ids;
        std::vector<std::uint32_t> next_cls(n);
        std::string key;
        for (std::size_t i = 0; i < n; ++i) {
            key.clear();
            key.append(reinterpret_cast<const char*>(&cls[i]), sizeof(std::uint32_t));
            for (sym_id x : reps) {
                std::uint32_t c = cls[remap[a.step(order[i], x)]];
                key.append(reinterpret_cast<const char*>(&c), sizeof(std::uint32_t));
            }
            auto [it, fresh] = sig_ids.emplace(key, static_cast<std::uint32_t>(sig_ids.size()));
            next_cls[i] = it->second;
            (void)fresh;
        }
        bool stable = sig_ids.size() == num_cls;
        num_cls = sig_ids.size();
        cls.swap(next_cls);
        if (stable) break;
    }

    // Quotient, then canonical BFS numbering over the quotient.
    std::vector<state_id> rep(num_cls, UINT32_MAX);
    for (std::size_t i = 0; i < n; ++i)
        if (rep[cls[i]] == UINT32_MAX) rep[cls[i]] = order[i];

    dfa q;
    q.alphabet = a.alphabet;
    std::vector<state_id> bfs_id(num_cls, UINT32_MAX);
    std::vector<std::uint32_t> bfs;
    std::uint32_t init_cls = cls[0];
    bfs_id[init_cls] = 0;
    bfs.push_back(init_cls);
    for (std::size_t i = 0; i < bfs.size(); ++i) {
        std::uint32_t c = bfs[i];
        for (sym_id x = 0; x < a.alphabet; ++x) {
            std::uint32_t tc = cls[remap[a.step(rep[c], x)]];
            if (bfs_id[tc] == UINT32_MAX) {
                bfs_id[tc] = static_cast<state_id>(bfs.size());
                bfs.push_back(tc);
            }
        }
    }
    q.num_states = static_cast<state_id>(bfs.size());
    q.initial = 0;
    q.next.resize(std::size_t{q.num_states} * q.alphabet);
    q.accepting.resize(q.num_states);
    for (std::size_t i = 0; i < bfs.size(); ++i) {
        std::uint32_t c = bfs[i];
        q.accepting[i] = a.accepting[rep[c]];
        for (sym_id x = 0; x < a.alphabet; ++x)
            q.next[i * q.alphabet + x] = bfs_id[cls[remap[a.step(rep[c], x)]]];
    }
    return q;
}

dfa minimal(const nfa& a, std::size_t state_budget) { return minimize(determinize(a, state_budget)); }

dfa minimal_reversal(const nfa& a, std::size_t state_budget) {
    dfa r = minimize(determinize(quotient_bisim(trim(reverse(a))), state_budget));
    return minimize(determinize(trim(reverse(to_nfa(r))), state_budget));
}

nfa trim(const nfa& a) {
    std::vector<char> fwd(a.size(), 0), bwd(a.size(), 0);
    std::vector<state_id> stack;
    for (state_id s : a.initials)
        if (!fwd[s]) {
            fwd[s] = 1;
            stack.push_back(s);
        }
    while (!stack.empty()) {
        state_id s = stack.back();
        stack.pop_back();
        for (auto [x, t] : a.edges[s])
            if (!fwd[t]) {
                fwd[t] = 1;
                stack.push_back(t);
            }
        for (state_id t : a.eps[s])
            if (!fwd[t]) {
                fwd[t] = 1;
                stack.push_back(t);
            }
    }
    std::vector<std::vector<state_id>> rev(a.size());
    for (state_id s = 0; s < a.size(); ++s) {
        for (auto [x, t] : a.edges[s]) rev[t].push_back(s);
        for (state_id t : a.eps[s]) rev[t].push_back(s);
    }
    for (state_id s : a.finals)
        if (!bwd[s]) {
            bwd[s] = 1;
            stack.push_back(s);
        }
    while (!stack.empty()) {
        state_id s = stack.back();
        stack.pop_back();
        for (state_id t : rev[s])
            if (!bwd[t]) {
                bwd[t] = 1;
                stack.push_back(t);
            }
    }
    nfa out(a.alphabet);
    std::vector<state_id> remap(a.size(), UINT32_MAX);
    for (state_id s = 0; s < a.size(); ++s)
        if (fwd[s] && bwd[s]) remap[s] = out.add_state();
    for (state_id s = 0; s < a.size(); ++s) {
        if (remap[s] == UINT32_MAX) continue;
        for (auto [x, t] : a.edges[s])
            if (remap[t] != UINT32_MAX) out.add_edge(remap[s], x, remap[t]);
        for (state_id t : a.eps[s])
            if (remap[t] != UINT32_MAX) out.add_eps(remap[s], remap[t]);
    }
    for (state_id s : a.initials)
        if (remap[s] != UINT32_MAX) out.initials.push_back(remap[s]);
    for (state_id s : a.finals)
        if (remap[s] != UINT32_MAX) out.finals.push_back(remap[s]);
    return out;
}

nfa reverse(const nfa& a) {
    nfa out(a.alphabet);
    for (state_id s = 0; s < a.size(); ++s) out.add_state();
    for (state_id s = 0; s < a.size(); ++s) {
        for (auto [x, t] : a.edges[s]) out.add_edge(t, x, s);
        for (state_id t : a.eps[s]) out.add_eps(t, s);
    }
    out.initials = a.finals;
    out.finals = a.initials;
    return out;
}

nfa quotient_bisim(const nfa& a) {
    std::size_t n = a.size();
    std::vector<std::uint32_t> cls(n, 0);
    std::vector<char> fin(n, 0);
    for (state_id f : a.finals) fin[f] = 1;
    for (std::size_t s = 0; s < n; ++s) cls[s] = fin[s];
    std::size_t num_cls = 2;
    std::vector<std::pair<sym_id, std::uint32_t>> sig;
    for (;;) {
        std::unordered_map<std::string, std::uint32_t> sig_ids;
        std::vector<std::uint32_t> next_cls(n);
        std::string key;
        for (std::size_t s = 0; s < n; ++s) {
            sig.clear();
            for (auto [x, t] : a.edges[s]) sig.emplace_back(x, cls[t]);
            for (state_id t : a.eps[s]) sig.emplace_back(a.alphabet, cls[t]);
            std::sort(sig.begin(), sig.end());
            sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
            key.clear();
            key.append(reinterpret_cast<const char*>(&cls[s]), sizeof(std::uint32_t));
            key.append(reinterpret_cast<const char*>(sig.data()),
                       sig.size() * sizeof(sig.front()));
            auto [it, fresh] = sig_ids.emplace(key, static_cast<std::uint32_t>(sig_ids.size()));
            next_cls[s] = it->second;
            (void)fresh;
        }
        bool stable = sig_ids.size() == num_cls;
        num_cls = sig_ids.size();
        cls.swap(next_cls);
        if (stable) break;
    }

    nfa out(a.alphabet);
    for (std::size_t c = 0; c < num_cls; ++c) out.add_state();
    std::vector<char> seen(num_cls, 0);
    std::vector<std::vector<std::pair<sym_id, state_id>>> dedup(num_cls);
    for (std::size_t s = 0; s < n; ++s) {
        if (seen[cls[s]]) continue;
        seen[cls[s]] = 1;
        for (auto [x, t] : a.edges[s]) out.add_edge(cls[s], x, cls[t]);
        for (state_id t : a.eps[s]) out.add_eps(cls[s], cls[t]);
    }
    for (std::size_t c = 0; c < num_cls; ++c) {
        auto& es = out.edges[c];
        std::sort(es.begin(), es.end());
        es.erase(std::unique(es.begin(), es.end()), es.end());
        auto& ep = out.eps[c];
        std::sort(ep.begin(), ep.end());
        ep.erase(std::unique(ep.begin(), ep.end()), ep.end());
    }
    std::vector<char> init_seen(num_cls, 0), fin_seen(num_cls, 0);
    for (state_id s : a.initials)
        if (!init_seen[cls[s]]) {
            init_seen[cls[s]] = 1;
            out.initials.push_back(cls[s]);
        }
    for (state_id s : a.finals)
        if (!fin_seen[cls[s]]) {
            fin_seen[cls[s]] = 1;
            out.finals.push_back(cls[s]);
        }
    return out;
}

dfa product(const dfa& a, const dfa& b, const std::function<bool(bool, bool)>& op) {
    if (a.alphabet != b.alphabet)
        throw std::invalid_argument("product: alphabet size mismatch");
    dfa p;
    p.alphabet = a.alphabet;
    std::unordered_map<std::uint64_t, state_id> index;
    std::vector<std::pair<state_id, state_id>> pairs;
    auto intern = [&](state_id x, state_id y) {
        std::uint64_t key = (std::uint64_t{x} << 32) | y;
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        state_id id = static_cast<state_id>(pairs.size());
        index.emplace(key, id);
        pairs.emplace_back(x, y);
        p.accepting.push_back(op(a.accepting[x] != 0, b.accepting[y] != 0) ? 1 : 0);
        return id;
    };
    p.initial = intern(a.initial, b.initial);
    for (state_id cur = 0; cur < pairs.size(); ++cur) {
        auto [x, y] = pairs[cur];
        p.next.resize(std::size_t{pairs.size()} * p.alphabet, 0);
        for (sym_id s = 0; s < p.alphabet; ++s) {
            state_id nid = intern(a.step(x, s), b.step(y, s));
            p.next.resize(std::size_t{pairs.size()} * p.alphabet, 0);
            p.next[std::size_t{cur} * p.alphabet + s] = nid;
        }
    }
    p.num_states = static_cast<state_id>(pairs.size());
    return minimize(p);
}

dfa intersect(const dfa& a, const dfa& b) {
    return product(a, b, [](bool x, bool y) { return x && y; });
}
dfa unite(const dfa& a, const dfa& b) {
    return product(a, b, [](bool x, bool y) { return x || y; });
}
dfa difference(const dfa& a, const dfa& b) {
    return product(a, b, [](bool x, bool y) { return x && !y; });
}
dfa complement_in(const dfa& universe, const dfa& a) { return difference(universe, a); }

bool is_empty_lang(const dfa& a) {
    std::vector<bool> seen(a.num_states, false);
    std::vector<state_id> stack{a.initial};
    seen[a.initial] = true;
    while (!stack.empty()) {
        state_id s = stack.back();
        stack.pop_back();
        if (a.accepting[s]) return false;
        for (sym_id x = 0; x < a.alphabet; ++x) {
            state_id t = a.step(s, x);
            if (!seen[t]) {
                seen[t] = true;
                stack.push_back(t);
            }
        }
    }
    return true;
}

bool subset_of(const dfa& a, const dfa& b) { return is_empty_lang(difference(a, b)); }

bool equivalent(const dfa& a, const dfa& b) { return minimize(a) == minimize(b); }

static std::vector<bool> productive(const dfa& a) {
    std::vector<std::vector<state_id>> rev(a.num_states);
    for (state_id s = 0; s < a.num_states; ++s)
        for (sym_id x = 0; x < a.alphabet; ++x) rev[a.step(s, x)].push_back(s);
    std::vector<bool> good(a.num_states, false);
    std::vector<state_id> stack;
    for (state_id s = 0; s < a.num_states; ++s)
        if (a.accepting[s]) {
            good[s] = true;
            stack.push_back(s);
        }
    while (!stack.empty()) {
        state_id s = stack.back();
        stack.pop_back();
        for (state_id t : rev[s])
            if (!good[t]) {
                good[t] = true;
                stack.push_back(t);
            }
    }
    return good;
}

std::optional<std::vector<sym_id>> shortest_word(const dfa& a) {
    std::vector<std::pair<state_id, sym_id>> pred(a.num_states, {UINT32_MAX, 0});
    std::vector<bool> seen(a.num_states, false);
    std::deque<state_id> queue{a.initial};
    seen[a.initial] = true;
    while (!queue.empty()) {
        state_id s = queue.front();
        queue.pop_front();
        if (a.accepting[s]) {
            std::vector<sym_id> word;
            state_id cur = s;
            while (pred[cur].first != UINT32_MAX) {
                word.push_back(pred[cur].second);
                cur = pred[cur].first;
            }
            std::reverse(word.begin(), word.end());
            return word;
        }
        for (sym_id x = 0; x < a.alphabet; ++x) {
            state_id t = a.step(s, x);
            if (!seen[t]) {
                seen[t] = true;
                pred[t] = {s, x};
                queue.push_back(t);
            }
        }
    }
    return std::nullopt;
}

std::vector<std::vector<sym_id>> enumerate_words(const dfa& a, std::size_t max_len,
                                                 std::size_t count_budget) {
    std::vector<bool> good = productive(a);
    std::vector<std::vector<sym_id>> out;
    std::vector<sym_id> word;
    // Iterative deepening keeps the output in length-lexicographic order.
    for (std::size_t len = 0; len <= max_len; ++len) {
        struct frame {
            state_id s;
            sym_id x;
        };
        std::vector<frame> stack{{a.initial, 0}};
        word.clear();
        while (!stack.empty()) {
            frame& f = stack.back();
            if (word.size() == len) {
                if (a.accepting[f.s]) {
                    out.push_back(word);
                    if (out.size() > count_budget)
                        throw budget_exceeded("enumerate_words: count budget exceeded");
                }
                stack.pop_back();
                if (!word.empty()) word.pop_back();
                continue;
            }
            if (f.x >= a.alphabet) {
                stack.pop_back();
                if (!word.empty()) word.pop_back();
                continue;
            }
            sym_id x = f.x++;
            state_id t = a.step(f.s, x);
            if (good[t]) {
                word.push_back(x);
                stack.push_back({t, 0});
            }
        }
    }
    return out;
}

dfa dfa_from_words(sym_id alphabet, const std::vector<std::vector<sym_id>>& words) {
    nfa a(alphabet);
    state_id root = a.add_state();
    a.initials.push_back(root);
    for (const auto& w : words) {
        state_id cur = root;
        for (sym_id x : w) {
            state_id nxt = a.add_state();
            a.add_edge(cur, x, nxt);
            cur = nxt;
        }
        a.finals.push_back(cur);
    }
    return minimal(a);
}

nfa to_nfa(const dfa& a) {
    nfa n(a.alphabet);
    for (state_id s = 0; s < a.num_states; ++s) n.add_state();
    for (state_id s = 0; s < a.num_states; ++s)
        for (sym_id x = 0; x < a.alphabet; ++x) n.add_edge(s, x, a.step(s, x));
    n.initials.push_back(a.initial);
    for (state_id s = 0; s < a.num_states; ++s)
        if (a.accepting[s]) n.finals.push_back(s);
    return n;
}

nfa remap_symbols(const nfa& a, sym_id new_alphabet,
                  const std::function<std::optional<sym_id>(sym_id)>& f) {
    nfa out(new_alphabet);
    for (std::size_t s = 0; s < a.size(); ++s) out.add_state();
    for (state_id s = 0; s < a.size(); ++s) {
        for (auto [x, t] : a.edges[s]) {
            auto y = f(x);
            if (y) out.add_edge(s, *y, t);
            else out.add_eps(s, t);
        }
        for (state_id t : a.eps[s]) out.add_eps(s, t);
    }
    out.initials = a.initials;
    out.finals = a.finals;
    return out;
}

nfa morph_image(const nfa& a, sym_id new_alphabet,
                const std::function<std::vector<sym_id>(sym_id)>& f) {
    nfa out(new_alphabet);
    for (std::size_t s = 0; s < a.size(); ++s) out.add_state();
    for (state_id s = 0; s < a.size(); ++s) {
        for (auto [x, t] : a.edges[s]) {
            std::vector<sym_id> word = f(x);
            if (word.empty()) {
                out.add_eps(s, t);
                continue;
            }
            state_id cur = s;
            for (std::size_t i = 0; i + 1 < word.size(); ++i) {
                state_id mid = out.add_state();
                out.add_edge(cur, word[i], mid);
                cur = mid;
            }
            out.add_edge(cur, word.back(), t);
        }
        for (state_id t : a.eps[s]) out.add_eps(s, t);
    }
    out.initials = a.initials;
    out.finals = a.finals;
    return out;
}

dfa cylinder(const dfa& a, const tuple_alphabet& tracks, std::size_t track) {
    dfa out;
    out.alphabet = tracks.size();
    out.num_states = a.num_states;
    out.initial = a.initial;
    out.accepting = a.accepting;
    out.next.resize(std::size_t{out.num_states} * out.alphabet);
    for (state_id s = 0; s < out.num_states; ++s)
        for (sym_id x = 0; x < out.alphabet; ++x)
            out.next[std::size_t{s} * out.alphabet + x] = a.step(s, tracks.decode(x)[track]);
    return out;
}

dfa letter_filter(sym_id alphabet, const std::function<bool(sym_id)>& keep) {
    dfa out;
    out.alphabet = alphabet;
    out.num_states = 2;
    out.initial = 0;
    out.accepting = {1, 0};
    out.next.resize(2 * std::size_t{alphabet});
    for (sym_id x = 0; x < alphabet; ++x) {
        out.next[x] = keep(x) ? 0 : 1;
        out.next[std::size_t{alphabet} + x] = 1;
    }
    return out;
}

dfa apply_transducer(const transducer& t, const dfa& input, std::size_t state_budget) {
    std::vector<bool> alive = productive(input);
    nfa out(t.out_alphabet);
    std::unordered_map<std::uint64_t, state_id> index;
    std::vector<std::pair<state_id, state_id>> pairs;
    std::vector<state_id> worklist;
    auto intern = [&](state_id ts, state_id ds) {
        std::uint64_t key = (std::uint64_t{ts} << 32) | ds;
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        if (pairs.size() >= state_budget)
            throw budget_exceeded("apply_transducer: state budget exceeded");
        state_id id = out.add_state();
        index.emplace(key, id);
        pairs.emplace_back(ts, ds);
        worklist.push_back(id);
        return id;
    };
    std::vector<bool> t_final(t.core.size(), false);
    for (state_id f : t.core.finals) t_final[f] = true;

    for (state_id i : t.core.initials)
        if (alive[input.initial]) out.initials.push_back(intern(i, input.initial));

    sym_id in_blank = t.in_alphabet;
    sym_id out_blank = t.out_alphabet;
    while (!worklist.empty()) {
        state_id id = worklist.back();
        worklist.pop_back();
        auto [ts, ds] = pairs[id];
        if (t_final[ts] && input.accepting[ds]) out.finals.push_back(id);
        for (auto [xy, tt] : t.core.edges[ts]) {
            sym_id x = xy / (t.out_alphabet + 1);
            sym_id y = xy % (t.out_alphabet + 1);
            state_id dnext = ds;
            if (x != in_blank) {
                dnext = input.step(ds, x);
                if (!alive[dnext]) continue;
            }
            state_id nid = intern(tt, dnext);
            if (y != out_blank) out.add_edge(id, y, nid);
            else out.add_eps(id, nid);
        }
        for (state_id tt : t.core.eps[ts]) out.add_eps(id, intern(tt, ds));
    }
    return minimal(out, state_budget);
}

std::string dump_dfa(const dfa& a, const std::vector<std::string>& sym_names) {
    if (sym_names.size() != a.alphabet)
        throw std::invalid_argument("dump_dfa: symbol name count mismatch");
    std::ostringstream os;
    os << "dfa states=" << a.num_states << " alphabet=" << a.alphabet
       << " initial=" << a.initial << '\n';
    for (sym_id x = 0; x < a.alphabet; ++x) os << "sym " << x << ' ' << sym_names[x] << '\n';
    os << "final";
    for (state_id s = 0; s < a.num_states; ++s)
        if (a.accepting[s]) os << ' ' << s;
    os << '\n';
    for (state_id s = 0; s < a.num_states; ++s)
        for (sym_id x = 0; x < a.alphabet; ++x)
            os << "edge " << s << ' ' << x << ' ' << a.step(s, x) << '\n';
    return os.str();
}

std::pair<dfa, std::vector<std::string>> parse_dfa(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    dfa a;
    std::vector<std::string> names;
    bool header = false;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string kind;
        ls >> kind;
        if (kind == "dfa") {
            std::string kv;
            while (ls >> kv) {
                auto eq = kv.find('=');
                if (eq == std::string::npos) throw parse_error("parse_dfa: bad header item " + kv);
                std::string k = kv.substr(0, eq);
                long v = std::stol(kv.substr(eq + 1));
                if (k == "states") a.num_states = static_cast<state_id>(v);
                else if (k == "alphabet") a.alphabet = static_cast<sym_id>(v);
                else if (k == "initial") a.initial = static_cast<state_id>(v);
                else throw parse_error("parse_dfa: bad header key " + k);
            }
            a.next.assign(std::size_t{a.num_states} * a.alphabet, 0);
            a.accepting.assign(a.num_states, 0);
            names.assign(a.alphabet, "");
            header = true;
        } else if (kind == "sym") {
            if (!header) throw parse_error("parse_dfa: sym before header");
            std::size_t idx;
            std::string name;
            ls >> idx >> name;
            if (idx >= names.size()) throw parse_error("parse_dfa: sym index out of range");
            names[idx] = name;
        } else if (kind == "final") {
            if (!header) throw parse_error("parse_dfa: final before header");
            state_id s;
            while (ls >> s) {
                if (s >= a.num_states) throw parse_error("parse_dfa: final out of range");
                a.accepting[s] = 1;
            }
        } else if (kind == "edge") {
            if (!header) throw parse_error("parse_dfa: edge before header");
            state_id s, t;
            sym_id x;
            ls >> s >> x >> t;
            if (s >= a.num_states || t >= a.num_states || x >= a.alphabet)
                throw parse_error("parse_dfa: edge out of range");
            a.next[std::size_t{s} * a.alphabet + x] = t;
        } else {
            throw parse_error("parse_dfa: unknown line kind " + kind);
        }
    }
    if (!header) throw parse_error("parse_dfa: missing header");
    return {std::move(a), std::move(names)};
}

} // namespace bsq
