#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bsq/decide.hpp"
#include "bsq/hardness.hpp"
#include "bsq/oracle.hpp"

namespace py = pybind11;
using namespace bsq;

namespace {

compile_options opts_from(std::size_t kmax) {
    compile_options o;
    o.k_max = kmax;
    return o;
}

} // namespace

PYBIND11_MODULE(bsq, m) {
    m.doc() = "exact rational-subset toolkit for BS(1,q)";

    m.def(
        "pe_text",
        [](int q, const std::string& word) {
            group_context ctx(q);
            return pe_to_text(pe_encode(ctx, eval_word(ctx, parse_word(word))));
        },
        py::arg("q"), py::arg("word"), "canonical pointed expansion of a generator word");

    m.def(
        "multiply_words",
        [](int q, const std::string& left, const std::string& right) {
            group_context ctx(q);
            auto g = multiply(ctx, eval_word(ctx, parse_word(left)),
                              eval_word(ctx, parse_word(right)));
            return pe_to_text(pe_encode(ctx, g));
        },
        py::arg("q"), py::arg("left"), py::arg("right"));

    m.def(
        "compile_dump",
        [](const std::string& bs_text, std::size_t kmax) {
            auto compiled = compile_rational(parse_bs(bs_text), opts_from(kmax));
            return py::make_tuple(pe_dump(compiled.set), compiled.stats.certified,
                                  compiled.stats.k_used);
        },
        py::arg("bs_text"), py::arg("kmax") = 0,
        "compile a bs description; returns (dump, certified, k_used)");

    m.def(
        "member",
        [](const std::string& bs_text, const std::string& word, std::size_t kmax) {
            auto a = parse_bs(bs_text);
            return rational_membership(a, eval_word(a.ctx, parse_word(word)), opts_from(kmax));
        },
        py::arg("bs_text"), py::arg("word"), py::arg("kmax") = 0);

    m.def(
        "set_op",
        [](const std::string& name, const std::string& a_dump,
           const std::optional<std::string>& b_dump) {
            auto a = pe_parse(a_dump);
            if (name == "complement") return pe_dump(pe_complement(a));
            if (name == "inverse") return pe_dump(pe_inverse_set(a));
            if (!b_dump) throw std::invalid_argument("set_op: '" + name + "' needs two sets");
            auto b = pe_parse(*b_dump);
            if (name == "union") return pe_dump(pe_union(a, b));
            if (name == "intersect") return pe_dump(pe_intersection(a, b));
            if (name == "difference") return pe_dump(pe_difference(a, b));
            if (name == "product") return pe_dump(pe_product(a, b));
            throw std::invalid_argument("set_op: unknown op '" + name + "'");
        },
        py::arg("name"), py::arg("a"), py::arg("b") = std::nullopt);

    m.def(
        "contains",
        [](const std::string& dump, int q, const std::string& word) {
            group_context ctx(q);
            return pe_member(pe_parse(dump), eval_word(ctx, parse_word(word)));
        },
        py::arg("dump"), py::arg("q"), py::arg("word"));

    m.def(
        "recognizability_witness",
        [](const std::string& dump, std::size_t kmax) -> std::optional<std::size_t> {
            auto res = is_recognizable_bounded(pe_parse(dump), kmax);
            if (res.recognizable) return res.witness_k;
            return std::nullopt;
        },
        py::arg("dump"), py::arg("kmax") = 0,
        "smallest period found, or None up to the bound");

    m.def(
        "finite_index",
        [](int q, const std::vector<std::string>& gens,
           std::size_t max_cosets) -> std::optional<std::size_t> {
            std::vector<generator_word> words;
            for (const auto& g : gens) words.push_back(parse_word(g));
            auto res = has_finite_index_bounded(group_context(q), words, max_cosets);
            if (res.finite) return res.index;
            return std::nullopt;
        },
        py::arg("q"), py::arg("gens"), py::arg("max_cosets") = 64);

    m.def(
        "reduce_intersection_text",
        [](const std::vector<std::string>& dfa_texts, int q) {
            dfa_instance inst;
            for (const auto& t : dfa_texts) inst.push_back(parse_named_dfa(t));
            return serialize_bs(reduce_intersection(inst, group_context(q)));
        },
        py::arg("dfa_texts"), py::arg("q"));

    m.def(
        "brute_elements",
        [](const std::string& bs_text, std::size_t max_run) {
            auto a = parse_bs(bs_text);
            std::vector<std::string> out;
            for (const auto& g : oracle_elements(normalize(a), max_run))
                out.push_back(pe_to_text(pe_encode(a.ctx, g)));
            return out;
        },
        py::arg("bs_text"), py::arg("max_run"),
        "pe texts of all elements reached by runs of bounded length");
}
