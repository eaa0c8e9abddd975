#include "bsq/oracle.hpp"

#include <map>
#include <set>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace bsq {

namespace {

using element_key = std::tuple<big_int, std::uint32_t, std::int64_t>;
using node_key = std::tuple<std::size_t, big_int, std::uint32_t, std::int64_t>;

std::vector<std::vector<normalized_bs::edge>> adjacency(const normalized_bs& a) {
    std::vector<std::vector<normalized_bs::edge>> adj(a.num_states);
    for (const auto& e : a.edges) adj.at(e.src).push_back(e);
    return adj;
}

/** BFS over (state, element) pairs with dedup; calls on_final for each new
 *  pair landing on the final state.  Returning true stops the search. */
template <class Fn>
void element_search(const normalized_bs& a, std::size_t max_run_len, std::size_t node_budget,
                    Fn on_final) {
    auto adj = adjacency(a);
    std::set<node_key> seen;
    std::vector<std::pair<std::size_t, group_element>> frontier;

    auto push = [&](std::size_t s, const group_element& g,
                    std::vector<std::pair<std::size_t, group_element>>& out) {
        if (!seen.insert(node_key{s, g.num, g.den_exp, g.cursor}).second) return false;
        if (seen.size() > node_budget)
            throw budget_exceeded("element_search: node budget exceeded");
        out.emplace_back(s, g);
        return s == a.final && on_final(g);
    };

    if (push(a.initial, identity(), frontier)) return;
    for (std::size_t len = 0; len < max_run_len && !frontier.empty(); ++len) {
        std::vector<std::pair<std::size_t, group_element>> next;
        for (const auto& [s, g] : frontier)
            for (const auto& e : adj[s])
                if (push(e.dst, multiply(a.ctx, g, generator_element(e.label)), next)) return;
        frontier = std::move(next);
    }
}

} // namespace

std::vector<group_element> oracle_elements(const normalized_bs& a, std::size_t max_run_len,
                                           std::size_t node_budget) {
    std::set<element_key> found;
    std::vector<group_element> out;
    auto note = [&](const group_element& g) {
        if (found.insert(element_key{g.num, g.den_exp, g.cursor}).second) out.push_back(g);
        return false;
    };
    if (a.accepts_empty) note(identity());
    element_search(a, max_run_len, node_budget, note);
    return out;
}

bool oracle_member(const normalized_bs& a, const group_element& g, std::size_t max_run_len,
                   std::size_t node_budget) {
    if (a.accepts_empty && g == identity()) return true;
    bool hit = false;
    element_search(a, max_run_len, node_budget, [&](const group_element& h) {
        hit = h == g;
        return hit;
    });
    return hit;
}

namespace {

void dfs_runs(const std::vector<std::vector<std::pair<std::size_t, std::size_t>>>& adj,
              std::size_t cur, std::size_t dst, std::size_t depth_left,
              std::vector<std::size_t>& path, std::vector<std::vector<std::size_t>>& out,
              std::size_t count_budget, std::size_t& steps) {
    if (++steps > count_budget) throw budget_exceeded("oracle_runs: search budget exceeded");
    if (cur == dst) out.push_back(path);
    if (depth_left == 0) return;
    for (const auto& [idx, nxt] : adj[cur]) {
        path.push_back(idx);
        dfs_runs(adj, nxt, dst, depth_left - 1, path, out, count_budget, steps);
        path.pop_back();
    }
}

} // namespace

std::vector<oracle_run> oracle_runs_between(const normalized_bs& a, std::size_t src,
                                            std::size_t dst, std::size_t max_run_len,
                                            std::size_t count_budget) {
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(a.num_states);
    for (std::size_t i = 0; i < a.edges.size(); ++i)
        adj.at(a.edges[i].src).emplace_back(i, a.edges[i].dst);
    std::vector<std::vector<std::size_t>> paths;
    std::vector<std::size_t> path;
    std::size_t steps = 0;
    dfs_runs(adj, src, dst, max_run_len, path, paths, count_budget, steps);
    std::vector<oracle_run> out;
    out.reserve(paths.size());
    for (auto& p : paths) out.push_back(oracle_run{p, metrics_of(a, p)});
    return out;
}

std::vector<oracle_run> oracle_runs(const normalized_bs& a, std::size_t max_run_len,
                                    std::size_t count_budget) {
    return oracle_runs_between(a, a.initial, a.final, max_run_len, count_budget);
}

std::vector<sv_column> oracle_run_columns(const normalized_bs& a, std::size_t src,
                                          const std::vector<std::size_t>& edge_seq) {
    std::map<std::int64_t, std::pair<int, std::set<std::size_t>>> cols;
    std::int64_t pos = 0;
    std::size_t cur = src;
    cols[0].second.insert(src);
    for (std::size_t idx : edge_seq) {
        const auto& e = a.edges.at(idx);
        if (e.src != cur)
            throw std::invalid_argument("oracle_run_columns: edge sequence is not a chain");
        switch (e.label) {
        case generator::t: pos += 1; break;
        case generator::t_inv: pos -= 1; break;
        case generator::a:
            cols[pos].first += 1;
            cols[pos - 1];
            break;
        case generator::a_inv:
            cols[pos].first -= 1;
            cols[pos - 1];
            break;
        }
        cur = e.dst;
        cols[pos].second.insert(cur);
    }
    std::vector<sv_column> out;
    out.reserve(cols.size());
    for (auto it = cols.rbegin(); it != cols.rend(); ++it) {
        sv_column c;
        c.digit = it->second.first;
        c.start_marker = it->first == 0;
        c.end_marker = it->first == pos;
        c.states.assign(it->second.second.begin(), it->second.second.end());
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<big_int> oracle_sumset_star(const std::vector<big_int>& gens, const big_int& cap) {
    if (cap < 0) return {};
    if (!cap.fits_ulong_p()) throw budget_exceeded("oracle_sumset_star: cap too large");
    std::size_t c = cap.get_ui();
    std::vector<char> reach(c + 1, 0);
    reach[0] = 1;
    for (const auto& g : gens) {
        if (g < 0) throw std::invalid_argument("oracle_sumset_star: negative generator");
        if (g == 0 || g > cap) continue;
        std::size_t step = g.get_ui();
        for (std::size_t i = step; i <= c; ++i)
            if (reach[i - step]) reach[i] = 1;
    }
    std::vector<big_int> out;
    for (std::size_t i = 0; i <= c; ++i)
        if (reach[i]) out.emplace_back(static_cast<unsigned long>(i));
    return out;
}

} // namespace bsq
