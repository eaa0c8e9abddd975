#include "bsq/hardness.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

namespace bsq {

std::size_t named_dfa::state_by_name(const std::string& name) const {
    for (std::size_t i = 0; i < state_names.size(); ++i)
        if (state_names[i] == name) return i;
    throw parse_error("dfa: unknown state '" + name + "'");
}

named_dfa parse_named_dfa(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::optional<named_dfa> out;
    bool saw_initial = false;
    std::vector<std::tuple<std::string, std::string, std::string>> raw_edges;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind)) continue;
        if (kind == "dfa") {
            std::string kv;
            if (!(ls >> kv) || kv.rfind("alphabet=", 0) != 0)
                throw parse_error("dfa file: header must be 'dfa alphabet=<a,b,...>'");
            out.emplace();
            std::istringstream syms(kv.substr(9));
            std::string sym;
            while (std::getline(syms, sym, ','))
                if (!sym.empty()) out->alphabet.push_back(sym);
            if (out->alphabet.size() < 2)
                throw parse_error("dfa file: alphabet needs at least two symbols");
        } else if (kind == "state") {
            if (!out) throw parse_error("dfa file: state before header");
            std::string name;
            if (!(ls >> name)) throw parse_error("dfa file: state needs a name");
            bool initial = false, final = false;
            std::string flag;
            while (ls >> flag) {
                if (flag == "initial") initial = true;
                else if (flag == "final") final = true;
                else throw parse_error("dfa file: bad state flag '" + flag + "'");
            }
            out->state_names.push_back(name);
            out->final_flags.push_back(final);
            if (initial) {
                if (saw_initial) throw parse_error("dfa file: two initial states");
                out->initial = out->state_names.size() - 1;
                saw_initial = true;
            }
        } else if (kind == "edge") {
            if (!out) throw parse_error("dfa file: edge before header");
            std::string src, dst, sym;
            if (!(ls >> src >> dst >> sym)) throw parse_error("dfa file: edge needs src dst sym");
            raw_edges.emplace_back(src, dst, sym);
        } else {
            throw parse_error("dfa file: unknown line kind '" + kind + "'");
        }
    }
    if (!out) throw parse_error("dfa file: missing 'dfa alphabet=' header");
    if (!saw_initial) throw parse_error("dfa file: no initial state");
    std::size_t n = out->state_names.size(), k = out->alphabet.size();
    out->delta.assign(n, std::vector<std::size_t>(k, n));
    for (const auto& [src, dst, sym] : raw_edges) {
        auto it = std::find(out->alphabet.begin(), out->alphabet.end(), sym);
        if (it == out->alphabet.end()) throw parse_error("dfa file: unknown symbol '" + sym + "'");
        std::size_t s = out->state_by_name(src);
        std::size_t x = static_cast<std::size_t>(it - out->alphabet.begin());
        if (out->delta[s][x] != n)
            throw parse_error("dfa file: duplicate transition from '" + src + "' on '" + sym + "'");
        out->delta[s][x] = out->state_by_name(dst);
    }
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t x = 0; x < k; ++x)
            if (out->delta[s][x] == n)
                throw parse_error("dfa file: missing transition from '" + out->state_names[s] +
                                  "' on '" + out->alphabet[x] + "'");
    return *out;
}

std::string serialize_named_dfa(const named_dfa& d) {
    std::ostringstream os;
    os << "dfa alphabet=";
    for (std::size_t x = 0; x < d.alphabet.size(); ++x)
        os << (x ? "," : "") << d.alphabet[x];
    os << '\n';
    for (std::size_t s = 0; s < d.state_names.size(); ++s) {
        os << "state " << d.state_names[s];
        if (s == d.initial) os << " initial";
        if (d.final_flags[s]) os << " final";
        os << '\n';
    }
    for (std::size_t s = 0; s < d.state_names.size(); ++s)
        for (std::size_t x = 0; x < d.alphabet.size(); ++x)
            os << "edge " << d.state_names[s] << ' ' << d.state_names[d.delta[s][x]] << ' '
               << d.alphabet[x] << '\n';
    return os.str();
}

namespace {

void check_instance(const dfa_instance& inst) {
    if (inst.empty()) throw std::invalid_argument("dfa instance: no machines");
    for (const auto& d : inst) {
        if (d.alphabet.size() < 2)
            throw std::invalid_argument("dfa instance: alphabet needs at least two symbols");
        if (d.alphabet != inst.front().alphabet)
            throw std::invalid_argument("dfa instance: machines disagree on the alphabet");
    }
}

} // namespace

bool dfa_intersection_nonempty(const dfa_instance& inst) {
    check_instance(inst);
    std::size_t n = inst.size(), k = inst.front().alphabet.size();
    std::vector<std::size_t> start(n);
    for (std::size_t i = 0; i < n; ++i) start[i] = inst[i].initial;
    std::set<std::vector<std::size_t>> seen{start};
    std::deque<std::vector<std::size_t>> queue{start};
    auto all_final = [&](const std::vector<std::size_t>& tup) {
        for (std::size_t i = 0; i < n; ++i)
            if (!inst[i].final_flags[tup[i]]) return false;
        return true;
    };
    while (!queue.empty()) {
        auto tup = queue.front();
        queue.pop_front();
        if (all_final(tup)) return true;
        for (std::size_t x = 0; x < k; ++x) {
            std::vector<std::size_t> nxt(n);
            for (std::size_t i = 0; i < n; ++i) nxt[i] = inst[i].delta[tup[i]][x];
            if (seen.insert(nxt).second) queue.push_back(nxt);
        }
    }
    return false;
}

namespace {

/** a^d followed by t^n: write digit d at the current cell and advance to the
 *  next cell of the same track. */
generator_word write_and_advance(int d, std::size_t n) {
    generator_word w;
    for (int j = 0; j < d; ++j) w.push_back(generator::a);
    for (std::size_t j = 0; j < n; ++j) w.push_back(generator::t);
    return w;
}

/** (a^-g t)^n: subtract digit g from each of the next n cells, one per
 *  track, ending n cells to the right. */
generator_word remove_block(int g, std::size_t n) {
    generator_word w;
    for (std::size_t j = 0; j < n; ++j) {
        for (int c = 0; c < g; ++c) w.push_back(generator::a_inv);
        w.push_back(generator::t);
    }
    return w;
}

} // namespace

bs_automaton reduce_intersection(const dfa_instance& inst, const group_context& ctx) {
    check_instance(inst);
    std::size_t n = inst.size(), gamma = inst.front().alphabet.size();
    std::size_t ell = 1;
    while ((std::size_t{1} << ell) < gamma) ++ell;

    bs_automaton out(ctx);
    auto name = [](const std::string& base, std::size_t i, std::size_t j) {
        return base + std::to_string(i) + "_" + std::to_string(j);
    };

    // Relocation ring before machine i: wander by t steps, tracking the cell
    // index mod n, and leave only on the residue of track i.
    std::vector<std::size_t> ring_exit(n + 1);
    std::vector<std::vector<std::size_t>> ring(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        ring[i].resize(n);
        for (std::size_t j = 0; j < n; ++j)
            ring[i][j] = out.add_state(name("rel", i, j), i == 0 && j == 0);
        for (std::size_t j = 0; j < n; ++j) {
            out.edges.push_back({ring[i][j], ring[i][(j + 1) % n], {generator::t}});
            out.edges.push_back({ring[i][j], ring[i][(j + n - 1) % n], {generator::t_inv}});
        }
        ring_exit[i] = ring[i][i % n];
    }

    for (std::size_t i = 0; i < n; ++i) {
        const named_dfa& d = inst[i];
        std::vector<std::size_t> sim(d.state_names.size());
        for (std::size_t u = 0; u < sim.size(); ++u) sim[u] = out.add_state(name("sim", i, u));
        // Leading marker digit, then one composite edge per machine
        // transition spelling the ell-bit symbol code, high bit first.
        out.edges.push_back({ring_exit[i], sim[d.initial], write_and_advance(1, n)});
        for (std::size_t u = 0; u < sim.size(); ++u) {
            for (std::size_t x = 0; x < gamma; ++x) {
                generator_word label;
                for (std::size_t b = 0; b < ell; ++b) {
                    int bit = static_cast<int>(x >> (ell - 1 - b) & 1u);
                    auto part = write_and_advance(bit, n);
                    label.insert(label.end(), part.begin(), part.end());
                }
                out.edges.push_back({sim[u], sim[d.delta[u][x]], std::move(label)});
            }
            if (d.final_flags[u])
                out.edges.push_back({sim[u], ring[i + 1][i % n], write_and_advance(1, n)});
        }
    }

    std::size_t rem_loop = out.add_state("rem_loop");
    std::size_t free_move = out.add_state("free", false, true);
    out.edges.push_back({ring_exit[n], rem_loop, remove_block(1, n)});
    for (int g = 0; g < ctx.q; ++g)
        out.edges.push_back({rem_loop, rem_loop, remove_block(g, n)});
    out.edges.push_back({rem_loop, free_move, remove_block(1, n)});
    out.edges.push_back({free_move, free_move, {generator::t}});
    out.edges.push_back({free_move, free_move, {generator::t_inv}});
    return out;
}

} // namespace bsq
