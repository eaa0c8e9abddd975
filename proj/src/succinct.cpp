#include "bsq/succinct.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "bsq/errors.hpp"

namespace bsq {

std::uint32_t formula_builder::lit(std::uint32_t var, bool positive) {
    formula::node n;
    n.k = formula::node::kind::lit;
    n.var = var;
    n.positive = positive;
    f.pool.push_back(std::move(n));
    return static_cast<std::uint32_t>(f.pool.size() - 1);
}

std::uint32_t formula_builder::tt() {
    formula::node n;
    n.k = formula::node::kind::tt;
    f.pool.push_back(std::move(n));
    return static_cast<std::uint32_t>(f.pool.size() - 1);
}

std::uint32_t formula_builder::ff() {
    formula::node n;
    n.k = formula::node::kind::ff;
    f.pool.push_back(std::move(n));
    return static_cast<std::uint32_t>(f.pool.size() - 1);
}

std::uint32_t formula_builder::conj(std::vector<std::uint32_t> kids) {
    if (kids.empty()) return tt();
    formula::node n;
    n.k = formula::node::kind::conj;
    n.kids = std::move(kids);
    f.pool.push_back(std::move(n));
    return static_cast<std::uint32_t>(f.pool.size() - 1);
}

std::uint32_t formula_builder::disj(std::vector<std::uint32_t> kids) {
    if (kids.empty()) return ff();
    formula::node n;
    n.k = formula::node::kind::disj;
    n.kids = std::move(kids);
    f.pool.push_back(std::move(n));
    return static_cast<std::uint32_t>(f.pool.size() - 1);
}

formula formula_builder::done(std::uint32_t root) {
    f.root = root;
    return std::move(f);
}

namespace {

int eval_node(const formula& f, std::uint32_t id, const std::vector<int>& assign) {
    const auto& n = f.pool[id];
    switch (n.k) {
    case formula::node::kind::tt: return 1;
    case formula::node::kind::ff: return 0;
    case formula::node::kind::lit: {
        int a = n.var < assign.size() ? assign[n.var] : -1;
        if (a < 0) return -1;
        return n.positive ? a : 1 - a;
    }
    case formula::node::kind::conj: {
        bool pending = false;
        for (auto kid : n.kids) {
            int v = eval_node(f, kid, assign);
            if (v == 0) return 0;
            if (v < 0) pending = true;
        }
        return pending ? -1 : 1;
    }
    case formula::node::kind::disj: {
        bool pending = false;
        for (auto kid : n.kids) {
            int v = eval_node(f, kid, assign);
            if (v == 1) return 1;
            if (v < 0) pending = true;
        }
        return pending ? -1 : 0;
    }
    }
    return -1;
}

/** All satisfying completions over the listed variables, pruning as soon as
 *  the partial assignment falsifies the formula. */
template <class Fn>
void enum_sat(const formula& f, std::vector<int>& assign, const std::vector<std::uint32_t>& vars,
              std::size_t i, std::size_t& steps, std::size_t budget, Fn emit) {
    if (++steps > budget) throw budget_exceeded("succinct: enumeration budget");
    int v = eval_formula(f, assign);
    if (v == 0) return;
    if (i == vars.size()) {
        if (v == 1) emit();
        return;
    }
    for (int b = 0; b < 2; ++b) {
        assign[vars[i]] = b;
        enum_sat(f, assign, vars, i + 1, steps, budget, emit);
    }
    assign[vars[i]] = -1;
}

std::uint64_t pack_bits(const std::vector<int>& assign, std::size_t offset, std::size_t bits) {
    std::uint64_t s = 0;
    for (std::size_t j = 0; j < bits; ++j)
        if (assign[offset + j] == 1) s |= std::uint64_t{1} << j;
    return s;
}

void set_bits(std::vector<int>& assign, std::size_t offset, std::size_t bits, std::uint64_t s) {
    for (std::size_t j = 0; j < bits; ++j) assign[offset + j] = s >> j & 1u ? 1 : 0;
}

void check_vars(const formula& f, std::uint32_t limit, const char* where) {
    for (const auto& n : f.pool)
        if (n.k == formula::node::kind::lit && n.var >= limit)
            throw parse_error(std::string("succinct: variable out of range in ") + where);
}

} // namespace

int eval_formula(const formula& f, const std::vector<int>& assign) {
    return eval_node(f, f.root, assign);
}

nfa expand_succinct(const succinct_automaton& a, std::size_t max_states) {
    if (a.bits > 20 || (std::size_t{1} << a.bits) > max_states)
        throw budget_exceeded("expand_succinct: too many states");
    std::size_t n = std::size_t{1} << a.bits;
    nfa out(a.alphabet);
    for (std::size_t s = 0; s < n; ++s) out.add_state();
    std::vector<int> assign(2 * a.bits, -1);
    for (std::size_t s = 0; s < n; ++s) {
        set_bits(assign, 0, a.bits, s);
        std::fill(assign.begin() + static_cast<std::ptrdiff_t>(a.bits), assign.end(), -1);
        if (eval_formula(a.initial, assign) == 1) out.initials.push_back(static_cast<state_id>(s));
        if (eval_formula(a.final_cond, assign) == 1) out.finals.push_back(static_cast<state_id>(s));
        for (std::size_t t = 0; t < n; ++t) {
            set_bits(assign, a.bits, a.bits, t);
            for (sym_id x = 0; x < a.alphabet; ++x)
                if (eval_formula(a.delta[x], assign) == 1)
                    out.add_edge(static_cast<state_id>(s), x, static_cast<state_id>(t));
            std::fill(assign.begin() + static_cast<std::ptrdiff_t>(a.bits), assign.end(), -1);
        }
    }
    return out;
}

bool otf_membership(const succinct_automaton& a, const std::vector<sym_id>& word,
                    std::size_t state_budget) {
    std::vector<std::uint32_t> xvars, yvars;
    for (std::size_t j = 0; j < a.bits; ++j) {
        xvars.push_back(static_cast<std::uint32_t>(j));
        yvars.push_back(static_cast<std::uint32_t>(a.bits + j));
    }
    std::vector<int> assign(2 * a.bits, -1);
    std::size_t steps = 0;

    std::set<std::uint64_t> cur;
    enum_sat(a.initial, assign, xvars, 0, steps, state_budget,
             [&] { cur.insert(pack_bits(assign, 0, a.bits)); });
    std::fill(assign.begin(), assign.end(), -1);

    for (sym_id x : word) {
        if (x >= a.alphabet) throw std::invalid_argument("otf_membership: symbol out of range");
        std::set<std::uint64_t> next;
        for (std::uint64_t s : cur) {
            set_bits(assign, 0, a.bits, s);
            enum_sat(a.delta[x], assign, yvars, 0, steps, state_budget,
                     [&] { next.insert(pack_bits(assign, a.bits, a.bits)); });
            std::fill(assign.begin(), assign.end(), -1);
        }
        cur = std::move(next);
        if (cur.size() > state_budget) throw budget_exceeded("otf_membership: state budget");
    }

    for (std::uint64_t s : cur) {
        set_bits(assign, 0, a.bits, s);
        std::fill(assign.begin() + static_cast<std::ptrdiff_t>(a.bits), assign.end(), -1);
        if (eval_formula(a.final_cond, assign) == 1) return true;
    }
    return false;
}

succinct_automaton nfa_to_succinct(const nfa& a) {
    for (const auto& e : a.eps)
        if (!e.empty())
            throw std::invalid_argument("nfa_to_succinct: epsilon edges not representable");
    std::size_t bits = 1;
    while ((std::size_t{1} << bits) < a.size()) ++bits;

    auto cube = [bits](formula_builder& b, std::size_t offset, std::uint64_t s) {
        std::vector<std::uint32_t> kids;
        for (std::size_t j = 0; j < bits; ++j)
            kids.push_back(b.lit(static_cast<std::uint32_t>(offset + j), (s >> j & 1u) != 0));
        return b.conj(std::move(kids));
    };

    succinct_automaton out;
    out.alphabet = a.alphabet;
    out.bits = bits;
    {
        formula_builder b;
        std::vector<std::uint32_t> kids;
        for (state_id s : a.initials) kids.push_back(cube(b, 0, s));
        out.initial = b.done(b.disj(std::move(kids)));
    }
    {
        formula_builder b;
        std::vector<std::uint32_t> kids;
        for (state_id s : a.finals) kids.push_back(cube(b, 0, s));
        out.final_cond = b.done(b.disj(std::move(kids)));
    }
    for (sym_id x = 0; x < a.alphabet; ++x) {
        formula_builder b;
        std::vector<std::uint32_t> kids;
        for (state_id s = 0; s < a.size(); ++s)
            for (auto [sym, t] : a.edges[s])
                if (sym == x) kids.push_back(b.conj({cube(b, 0, s), cube(b, bits, t)}));
        out.delta.push_back(b.done(b.disj(std::move(kids))));
    }
    return out;
}

namespace {

/** y = x + 1 mod 2^m as a conjunction of per-bit equivalences; bit i flips
 *  iff all lower bits are ones. */
std::uint32_t increment_formula(formula_builder& b, std::size_t m) {
    std::vector<std::uint32_t> eqs;
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<std::uint32_t> ones, zeros;
        for (std::size_t j = 0; j < i; ++j) {
            ones.push_back(b.lit(static_cast<std::uint32_t>(j), true));
            zeros.push_back(b.lit(static_cast<std::uint32_t>(j), false));
        }
        std::uint32_t carry = b.conj(ones);
        std::uint32_t no_carry = b.disj(zeros);
        std::uint32_t xi = b.lit(static_cast<std::uint32_t>(i), true);
        std::uint32_t nxi = b.lit(static_cast<std::uint32_t>(i), false);
        std::uint32_t yi = b.lit(static_cast<std::uint32_t>(m + i), true);
        std::uint32_t nyi = b.lit(static_cast<std::uint32_t>(m + i), false);
        std::uint32_t flip = b.disj({b.conj({xi, no_carry}), b.conj({nxi, carry})});
        std::uint32_t keep = b.disj({b.conj({xi, carry}), b.conj({nxi, no_carry})});
        eqs.push_back(b.disj({b.conj({yi, flip}), b.conj({nyi, keep})}));
    }
    return b.conj(std::move(eqs));
}

formula zero_cube(std::size_t m) {
    formula_builder b;
    std::vector<std::uint32_t> kids;
    for (std::size_t j = 0; j < m; ++j) kids.push_back(b.lit(static_cast<std::uint32_t>(j), false));
    return b.done(b.conj(std::move(kids)));
}

} // namespace

succinct_automaton succinct_counter(std::size_t m) {
    succinct_automaton out;
    out.alphabet = 1;
    out.bits = m;
    out.initial = zero_cube(m);
    out.final_cond = zero_cube(m);
    formula_builder b;
    out.delta.push_back(b.done(increment_formula(b, m)));
    return out;
}

succinct_automaton succinct_threshold(std::size_t m) {
    succinct_automaton out;
    out.alphabet = 1;
    out.bits = m;
    out.initial = zero_cube(m);
    {
        formula_builder b;
        std::vector<std::uint32_t> kids;
        for (std::size_t j = 0; j < m; ++j)
            kids.push_back(b.lit(static_cast<std::uint32_t>(j), true));
        out.final_cond = b.done(b.conj(std::move(kids)));
    }
    formula_builder b;
    std::vector<std::uint32_t> all, nall, eqs;
    for (std::size_t j = 0; j < m; ++j) {
        all.push_back(b.lit(static_cast<std::uint32_t>(j), true));
        nall.push_back(b.lit(static_cast<std::uint32_t>(j), false));
        std::uint32_t xj = b.lit(static_cast<std::uint32_t>(j), true);
        std::uint32_t nxj = b.lit(static_cast<std::uint32_t>(j), false);
        std::uint32_t yj = b.lit(static_cast<std::uint32_t>(m + j), true);
        std::uint32_t nyj = b.lit(static_cast<std::uint32_t>(m + j), false);
        eqs.push_back(b.disj({b.conj({yj, xj}), b.conj({nyj, nxj})}));
    }
    std::uint32_t saturated = b.conj({b.conj(all), b.conj(eqs)});
    std::uint32_t stepping = b.conj({b.disj(nall), increment_formula(b, m)});
    out.delta.push_back(b.done(b.disj({saturated, stepping})));
    return out;
}

namespace {

void print_node(const formula& f, std::uint32_t id, std::size_t bits, std::ostringstream& os) {
    const auto& n = f.pool[id];
    switch (n.k) {
    case formula::node::kind::tt: os << "T"; break;
    case formula::node::kind::ff: os << "F"; break;
    case formula::node::kind::lit:
        if (!n.positive) os << "!";
        if (n.var < bits)
            os << "x" << n.var;
        else
            os << "y" << n.var - bits;
        break;
    case formula::node::kind::conj:
    case formula::node::kind::disj:
        os << "(" << (n.k == formula::node::kind::conj ? "and" : "or");
        for (auto kid : n.kids) {
            os << " ";
            print_node(f, kid, bits, os);
        }
        os << ")";
        break;
    }
}

std::string print_formula(const formula& f, std::size_t bits) {
    std::ostringstream os;
    print_node(f, f.root, bits, os);
    return os.str();
}

std::vector<std::string> tokenize_expr(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == '(' || c == ')') {
            if (!cur.empty()) out.push_back(std::exchange(cur, ""));
            out.push_back(std::string(1, c));
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) out.push_back(std::exchange(cur, ""));
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::uint32_t parse_node(formula_builder& b, const std::vector<std::string>& toks, std::size_t& i,
                         std::size_t bits) {
    if (i >= toks.size()) throw parse_error("succinct: truncated formula");
    std::string t = toks[i++];
    if (t == "T") return b.tt();
    if (t == "F") return b.ff();
    if (t == "(") {
        if (i >= toks.size()) throw parse_error("succinct: truncated formula");
        std::string op = toks[i++];
        if (op != "and" && op != "or") throw parse_error("succinct: unknown operator " + op);
        std::vector<std::uint32_t> kids;
        while (i < toks.size() && toks[i] != ")") kids.push_back(parse_node(b, toks, i, bits));
        if (i >= toks.size()) throw parse_error("succinct: missing )");
        ++i;
        return op == "and" ? b.conj(std::move(kids)) : b.disj(std::move(kids));
    }
    bool positive = true;
    if (!t.empty() && t[0] == '!') {
        positive = false;
        t = t.substr(1);
    }
    if (t.size() < 2 || (t[0] != 'x' && t[0] != 'y'))
        throw parse_error("succinct: bad token " + t);
    std::size_t idx = 0;
    try {
        idx = std::stoul(t.substr(1));
    } catch (...) {
        throw parse_error("succinct: bad variable " + t);
    }
    if (idx >= bits) throw parse_error("succinct: variable index out of range: " + t);
    std::uint32_t var = static_cast<std::uint32_t>(t[0] == 'x' ? idx : bits + idx);
    return b.lit(var, positive);
}

formula parse_formula(const std::string& text, std::size_t bits) {
    auto toks = tokenize_expr(text);
    formula_builder b;
    std::size_t i = 0;
    std::uint32_t root = parse_node(b, toks, i, bits);
    if (i != toks.size()) throw parse_error("succinct: trailing tokens in formula");
    return b.done(root);
}

} // namespace

std::string print_succinct(const succinct_automaton& a) {
    std::ostringstream os;
    os << "succinct bits=" << a.bits << " alphabet=" << a.alphabet << "\n";
    os << "init " << print_formula(a.initial, a.bits) << "\n";
    os << "final " << print_formula(a.final_cond, a.bits) << "\n";
    for (sym_id x = 0; x < a.alphabet; ++x)
        os << "trans " << x << " " << print_formula(a.delta[x], a.bits) << "\n";
    return os.str();
}

succinct_automaton parse_succinct(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    succinct_automaton out;
    bool header = false, have_init = false, have_final = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string word;
        ls >> word;
        if (word == "succinct") {
            std::string field;
            while (ls >> field) {
                auto eq = field.find('=');
                if (eq == std::string::npos) throw parse_error("succinct: bad header field " + field);
                std::string key = field.substr(0, eq);
                std::size_t value = std::stoul(field.substr(eq + 1));
                if (key == "bits")
                    out.bits = value;
                else if (key == "alphabet")
                    out.alphabet = static_cast<sym_id>(value);
                else
                    throw parse_error("succinct: unknown header key " + key);
            }
            out.delta.assign(out.alphabet, formula{});
            header = true;
        } else if (word == "init" || word == "final") {
            if (!header) throw parse_error("succinct: formula before header");
            std::string rest;
            std::getline(ls, rest);
            formula f = parse_formula(rest, out.bits);
            if (word == "init") {
                check_vars(f, static_cast<std::uint32_t>(out.bits), "init");
                out.initial = std::move(f);
                have_init = true;
            } else {
                check_vars(f, static_cast<std::uint32_t>(out.bits), "final");
                out.final_cond = std::move(f);
                have_final = true;
            }
        } else if (word == "trans") {
            if (!header) throw parse_error("succinct: formula before header");
            std::size_t sym = 0;
            ls >> sym;
            if (sym >= out.alphabet) throw parse_error("succinct: symbol out of range");
            std::string rest;
            std::getline(ls, rest);
            out.delta[sym] = parse_formula(rest, out.bits);
        } else {
            throw parse_error("succinct: unknown directive " + word);
        }
    }
    if (!header || !have_init || !have_final) throw parse_error("succinct: incomplete description");
    return out;
}

} // namespace bsq
