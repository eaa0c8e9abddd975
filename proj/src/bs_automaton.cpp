#include "bsq/bs_automaton.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace bsq {

std::size_t bs_automaton::add_state(const std::string& name, bool initial, bool final) {
    state_names.push_back(name);
    initial_flags.push_back(initial);
    final_flags.push_back(final);
    return state_names.size() - 1;
}

std::size_t bs_automaton::state_by_name(const std::string& name) const {
    for (std::size_t i = 0; i < state_names.size(); ++i)
        if (state_names[i] == name) return i;
    throw parse_error("bs automaton: unknown state '" + name + "'");
}

bs_automaton parse_bs(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::optional<bs_automaton> out;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind)) continue;
        if (kind == "bs") {
            std::string kv;
            if (!(ls >> kv) || kv.rfind("q=", 0) != 0)
                throw parse_error("bs file: header must be 'bs q=<int>'");
            int q;
            try {
                q = std::stoi(kv.substr(2));
            } catch (const std::exception&) {
                throw parse_error("bs file: bad q value");
            }
            if (q < 2) throw parse_error("bs file: q must be >= 2");
            out.emplace(group_context(q));
        } else if (kind == "state") {
            if (!out) throw parse_error("bs file: state before header");
            std::string name;
            if (!(ls >> name)) throw parse_error("bs file: state needs a name");
            bool initial = false, final = false;
            std::string flag;
            while (ls >> flag) {
                if (flag == "initial") initial = true;
                else if (flag == "final") final = true;
                else throw parse_error("bs file: bad state flag '" + flag + "'");
            }
            out->add_state(name, initial, final);
        } else if (kind == "edge") {
            if (!out) throw parse_error("bs file: edge before header");
            std::string src, dst;
            if (!(ls >> src >> dst)) throw parse_error("bs file: edge needs src and dst");
            std::string label;
            std::getline(ls, label);
            out->edges.push_back(
                {out->state_by_name(src), out->state_by_name(dst), parse_word(label)});
        } else {
            throw parse_error("bs file: unknown line kind '" + kind + "'");
        }
    }
    if (!out) throw parse_error("bs file: missing 'bs q=' header");
    std::size_t initials = std::count(out->initial_flags.begin(), out->initial_flags.end(), true);
    if (initials != 1) throw parse_error("bs file: exactly one initial state required");
    return *out;
}

std::string serialize_bs(const bs_automaton& a) {
    std::ostringstream os;
    os << "bs q=" << a.ctx.q << '\n';
    for (std::size_t i = 0; i < a.state_names.size(); ++i) {
        os << "state " << a.state_names[i];
        if (a.initial_flags[i]) os << " initial";
        if (a.final_flags[i]) os << " final";
        os << '\n';
    }
    for (const auto& e : a.edges)
        os << "edge " << a.state_names[e.src] << ' ' << a.state_names[e.dst] << ' '
           << word_to_string(e.label) << '\n';
    return os.str();
}

normalized_bs normalize(const bs_automaton& a) {
    normalized_bs out{a.ctx};
    std::size_t n = a.state_names.size();
    // Fresh single final ahead of time; word labels expand to chains, and
    // identity labels become epsilon moves eliminated by closure below.
    std::size_t final_state = n;
    std::size_t next_state = n + 1;
    std::vector<std::pair<std::size_t, std::size_t>> eps;
    std::vector<normalized_bs::edge> edges;
    std::size_t initial = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (a.initial_flags[i]) initial = i;
        if (a.final_flags[i]) eps.emplace_back(i, final_state);
    }
    for (const auto& e : a.edges) {
        if (e.label.empty()) {
            eps.emplace_back(e.src, e.dst);
            continue;
        }
        std::size_t cur = e.src;
        for (std::size_t i = 0; i + 1 < e.label.size(); ++i) {
            edges.push_back({cur, next_state, e.label[i]});
            cur = next_state++;
        }
        edges.push_back({cur, e.dst, e.label.back()});
    }
    // Transitive epsilon closure over the original state set.
    std::vector<std::vector<bool>> reach(next_state, std::vector<bool>(next_state, false));
    for (std::size_t i = 0; i < next_state; ++i) reach[i][i] = true;
    for (bool changed = true; changed;) {
        changed = false;
        for (auto [s, t] : eps)
            for (std::size_t u = 0; u < next_state; ++u)
                if (reach[t][u] && !reach[s][u]) {
                    reach[s][u] = true;
                    changed = true;
                }
    }
    out.accepts_empty = reach[initial][final_state];
    // Epsilon moves fold into the edges: (v, g, w) fires from any s that
    // epsilon-reaches v, and additionally jumps straight to the fresh final
    // when w epsilon-reaches it.  The fresh final has no outgoing edges.
    std::vector<normalized_bs::edge> closed;
    for (const auto& e : edges)
        for (std::size_t s = 0; s < next_state; ++s)
            if (reach[s][e.src]) {
                closed.push_back({s, e.dst, e.label});
                if (reach[e.dst][final_state]) closed.push_back({s, final_state, e.label});
            }
    std::sort(closed.begin(), closed.end(), [](const auto& x, const auto& y) {
        return std::tie(x.src, x.dst, x.label) < std::tie(y.src, y.dst, y.label);
    });
    closed.erase(std::unique(closed.begin(), closed.end(),
                             [](const auto& x, const auto& y) {
                                 return x.src == y.src && x.dst == y.dst && x.label == y.label;
                             }),
                 closed.end());

    // Restrict to states both reachable from the initial and co-reachable to
    // the final; everything else cannot lie on an accepting run.
    std::vector<bool> fwd(next_state, false), bwd(next_state, false);
    fwd[initial] = true;
    bwd[final_state] = true;
    for (bool changed = true; changed;) {
        changed = false;
        for (const auto& e : closed) {
            if (fwd[e.src] && !fwd[e.dst]) { fwd[e.dst] = true; changed = true; }
            if (bwd[e.dst] && !bwd[e.src]) { bwd[e.src] = true; changed = true; }
        }
    }
    std::vector<std::size_t> remap(next_state, SIZE_MAX);
    std::size_t kept = 0;
    for (std::size_t s = 0; s < next_state; ++s)
        if ((fwd[s] && bwd[s]) || s == initial || s == final_state) remap[s] = kept++;
    out.num_states = kept;
    out.initial = remap[initial];
    out.final = remap[final_state];
    for (const auto& e : closed)
        if (remap[e.src] != SIZE_MAX && remap[e.dst] != SIZE_MAX && fwd[e.src] && bwd[e.dst])
            out.edges.push_back({remap[e.src], remap[e.dst], e.label});
    return out;
}

split_moves split(const normalized_bs& a) {
    split_moves out;
    out.q = a.ctx.q;
    out.num_original = a.num_states;
    out.num_states = a.num_states;
    for (const auto& e : a.edges) {
        switch (e.label) {
            case generator::t:
                out.moves.push_back({e.src, e.dst, 0, +1});
                break;
            case generator::t_inv:
                out.moves.push_back({e.src, e.dst, 0, -1});
                break;
            case generator::a:
            case generator::a_inv: {
                std::size_t mid = out.num_states++;
                out.moves.push_back({e.src, mid, e.label == generator::a ? 1 : -1, -1});
                out.moves.push_back({mid, e.dst, 0, +1});
                break;
            }
        }
    }
    return out;
}

run_metrics metrics_of(const normalized_bs& a, const std::vector<std::size_t>& edge_seq) {
    run_metrics m;
    m.production = identity();
    std::map<std::int64_t, std::size_t> visits;
    std::int64_t pos = 0;
    visits[0] = 1;
    for (std::size_t idx : edge_seq) {
        const auto& e = a.edges[idx];
        m.production = multiply(a.ctx, m.production, generator_element(e.label));
        pos = m.production.cursor;
        m.pmax = std::max(m.pmax, pos);
        m.pmin = std::min(m.pmin, pos);
        m.thickness = std::max(m.thickness, ++visits[pos]);
    }
    m.pos = pos;
    return m;
}

} // namespace bsq
