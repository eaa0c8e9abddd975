#include "bsq/decide.hpp"

#include <deque>

namespace bsq {

bool rational_membership(const bs_automaton& a, const group_element& g,
                         const compile_options& opts) {
    return pe_member(compile_rational(a, opts).set, g);
}

fixed_subset_matcher::fixed_subset_matcher(const bs_automaton& a, const compile_options& opts)
    : set(compile_rational(a, opts).set) {}

bool fixed_subset_matcher::contains(const group_element& g) const { return pe_member(set, g); }

bool is_k_periodic(const pe_set& s, std::size_t k, std::size_t state_budget) {
    const group_context& ctx = s.ctx;
    group_element shift{0, 0, static_cast<std::int64_t>(k)};
    pe_set fwd = pe_singleton(ctx, shift);
    pe_set bwd = pe_singleton(ctx, inverse(ctx, shift));
    if (!pe_subset(pe_product(s, fwd, state_budget), s)) return false;
    if (!pe_subset(pe_product(s, bwd, state_budget), s)) return false;
    if (!pe_subset(pe_product(s, pe_power_diff(ctx, k, false), state_budget), s)) return false;
    return pe_subset(pe_product(s, pe_power_diff(ctx, k, true), state_budget), s);
}

recognizability_result is_recognizable_bounded(const pe_set& s, std::size_t k_max,
                                               std::size_t state_budget) {
    if (k_max == 0) k_max = s.machine.num_states;
    recognizability_result r;
    for (std::size_t k = 1; k <= k_max; ++k) {
        if (is_k_periodic(s, k, state_budget)) {
            r.recognizable = true;
            r.witness_k = k;
            return r;
        }
    }
    r.tried_up_to = k_max;
    return r;
}

bs_automaton subgroup_automaton(const group_context& ctx,
                                const std::vector<generator_word>& gens) {
    bs_automaton a(ctx);
    std::size_t h = a.add_state("h", true, true);
    for (const auto& w : gens) {
        if (w.empty()) continue;
        generator_word back;
        back.reserve(w.size());
        for (auto it = w.rbegin(); it != w.rend(); ++it) back.push_back(generator_inverse(*it));
        a.edges.push_back({h, h, w});
        a.edges.push_back({h, h, back});
    }
    return a;
}

index_result has_finite_index_bounded(const group_context& ctx,
                                      const std::vector<generator_word>& gens,
                                      std::size_t max_cosets, const compile_options& opts) {
    pe_set sub = compile_rational(subgroup_automaton(ctx, gens), opts).set;
    std::vector<group_element> reps{identity()};
    std::deque<group_element> todo{identity()};
    const generator steps[4] = {generator::a, generator::a_inv, generator::t, generator::t_inv};

    index_result r;
    while (!todo.empty()) {
        group_element g = todo.front();
        todo.pop_front();
        for (generator s : steps) {
            group_element cand = multiply(ctx, g, generator_element(s));
            bool known = false;
            for (const auto& rep : reps) {
                if (pe_member(sub, multiply(ctx, cand, inverse(ctx, rep)))) {
                    known = true;
                    break;
                }
            }
            if (known) continue;
            if (reps.size() >= max_cosets) {
                r.cosets_seen = reps.size();
                return r;
            }
            reps.push_back(cand);
            todo.push_back(cand);
        }
    }
    r.finite = true;
    r.index = reps.size();
    r.cosets_seen = reps.size();
    return r;
}

} // namespace bsq
