#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bsq/compile.hpp"
#include "bsq/decide.hpp"
#include "bsq/hardness.hpp"
#include "bsq/oracle.hpp"
#include "bsq/pe_set.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw bsq::parse_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

bsq::compile_options options_from(std::size_t kmax, std::size_t budget) {
    bsq::compile_options opts;
    opts.k_max = kmax;
    opts.state_budget = budget;
    return opts;
}

void print_stats(const bsq::compile_stats& st) {
    std::cerr << "k_used=" << st.k_used << " certified=" << (st.certified ? "yes" : "no")
              << " passes=" << st.passes << " thin_run_states=" << st.thin_run_states
              << " set_states=" << st.set_states << "\n";
}

int run(int argc, char** argv) {
    CLI::App app{"exact rational-subset toolkit for BS(1,q)"};
    app.require_subcommand(1);

    int q = 2;
    std::string word_text, word_text2, path, path2, op_name;
    std::vector<std::string> paths, gen_texts;
    std::size_t kmax = 0, budget = bsq::default_state_budget;
    std::size_t recog_kmax = 0, max_cosets = 64;
    std::size_t max_run = 10, max_pe_len = 6;
    bool stats = false;

    auto* c_pe = app.add_subcommand("pe", "canonical pointed expansion of a generator word");
    c_pe->add_option("--q", q, "base parameter")->check(CLI::Range(2, 1000));
    c_pe->add_option("word", word_text, "generator word, e.g. \"a t a t\"")->required();

    auto* c_mul = app.add_subcommand("mul", "product of two generator words, as pe text");
    c_mul->add_option("--q", q)->check(CLI::Range(2, 1000));
    c_mul->add_option("left", word_text)->required();
    c_mul->add_option("right", word_text2)->required();

    auto* c_compile = app.add_subcommand("compile", "compile a bs file to a pe-set dump");
    c_compile->add_option("file", path)->required();
    c_compile->add_option("--kmax", kmax, "occupancy cap (0: automatic bound)");
    c_compile->add_option("--budget", budget, "state budget");
    c_compile->add_flag("--stats", stats, "print compile stats to stderr");

    auto* c_member = app.add_subcommand("member", "does the bs file's set contain the word's element");
    c_member->add_option("file", path)->required();
    c_member->add_option("word", word_text)->required();
    c_member->add_option("--kmax", kmax);
    c_member->add_option("--budget", budget);

    auto* c_op = app.add_subcommand("op", "boolean/product/inverse on pe-set dumps");
    c_op->add_option("name", op_name, "union intersect difference complement product inverse")
        ->required();
    c_op->add_option("files", paths)->required();

    auto* c_recog = app.add_subcommand("recog", "search for a periodicity witness of a pe-set dump");
    c_recog->add_option("file", path)->required();
    c_recog->add_option("--kmax", recog_kmax, "largest period to try (0: state count)");

    auto* c_index = app.add_subcommand("finite-index", "coset count of the generated subgroup");
    c_index->add_option("--q", q)->check(CLI::Range(2, 1000));
    c_index->add_option("--gens", gen_texts, "generator words, one per occurrence")->required();
    c_index->add_option("--max-cosets", max_cosets);
    c_index->add_option("--kmax", kmax);
    c_index->add_option("--budget", budget);

    auto* c_hard = app.add_subcommand("hardness", "dfa intersection instance -> bs automaton");
    c_hard->add_option("--q", q)->check(CLI::Range(2, 1000));
    c_hard->add_option("files", paths, "dfa files over a shared alphabet")->required();

    auto* c_check = app.add_subcommand("oracle-check", "compile vs brute force on a window");
    c_check->add_option("file", path)->required();
    c_check->add_option("--max-run", max_run, "run length cap for the brute-force side");
    c_check->add_option("--max-pe-len", max_pe_len, "token cap for compared elements");
    c_check->add_option("--kmax", kmax);
    c_check->add_option("--budget", budget);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (c_pe->parsed()) {
        bsq::group_context ctx(q);
        auto g = eval_word(ctx, bsq::parse_word(word_text));
        std::cout << pe_to_text(pe_encode(ctx, g)) << "\n";
        return 0;
    }
    if (c_mul->parsed()) {
        bsq::group_context ctx(q);
        auto g = multiply(ctx, eval_word(ctx, bsq::parse_word(word_text)),
                          eval_word(ctx, bsq::parse_word(word_text2)));
        std::cout << pe_to_text(pe_encode(ctx, g)) << "\n";
        return 0;
    }
    if (c_compile->parsed()) {
        auto a = bsq::parse_bs(read_file(path));
        auto compiled = compile_rational(a, options_from(kmax, budget));
        if (stats) print_stats(compiled.stats);
        std::cout << pe_dump(compiled.set);
        return 0;
    }
    if (c_member->parsed()) {
        auto a = bsq::parse_bs(read_file(path));
        auto g = eval_word(a.ctx, bsq::parse_word(word_text));
        bool in = rational_membership(a, g, options_from(kmax, budget));
        std::cout << (in ? "member" : "not-member") << "\n";
        return in ? 0 : 1;
    }
    if (c_op->parsed()) {
        std::size_t want = op_name == "complement" || op_name == "inverse" ? 1 : 2;
        if (paths.size() != want)
            throw CLI::ValidationError("op " + op_name + " takes " + std::to_string(want) +
                                       " file(s)");
        auto a = bsq::pe_parse(read_file(paths[0]));
        bsq::pe_set r = a;
        if (op_name == "complement") r = pe_complement(a);
        else if (op_name == "inverse") r = pe_inverse_set(a);
        else {
            auto b = bsq::pe_parse(read_file(paths[1]));
            if (op_name == "union") r = pe_union(a, b);
            else if (op_name == "intersect") r = pe_intersection(a, b);
            else if (op_name == "difference") r = pe_difference(a, b);
            else if (op_name == "product") r = pe_product(a, b);
            else throw CLI::ValidationError("unknown op '" + op_name + "'");
        }
        std::cout << pe_dump(r);
        return 0;
    }
    if (c_recog->parsed()) {
        auto s = bsq::pe_parse(read_file(path));
        auto res = is_recognizable_bounded(s, recog_kmax);
        if (res.recognizable) {
            std::cout << "Recognizable(" << res.witness_k << ")\n";
            return 0;
        }
        std::cout << "NotPeriodicUpTo(" << res.tried_up_to << ")\n";
        return 1;
    }
    if (c_index->parsed()) {
        bsq::group_context ctx(q);
        std::vector<bsq::generator_word> gens;
        for (const auto& t : gen_texts) gens.push_back(bsq::parse_word(t));
        auto res = has_finite_index_bounded(ctx, gens, max_cosets, options_from(kmax, budget));
        if (res.finite) {
            std::cout << "FiniteIndex(" << res.index << ")\n";
            return 0;
        }
        std::cout << "NoAnswerUpTo(" << res.cosets_seen << ")\n";
        return 1;
    }
    if (c_hard->parsed()) {
        bsq::dfa_instance inst;
        for (const auto& p : paths) inst.push_back(bsq::parse_named_dfa(read_file(p)));
        std::cout << serialize_bs(reduce_intersection(inst, bsq::group_context(q)));
        return 0;
    }
    if (c_check->parsed()) {
        auto a = bsq::parse_bs(read_file(path));
        auto compiled = compile_rational(a, options_from(kmax, budget));
        auto window = pe_elements(compiled.set, max_pe_len);
        auto brute = oracle_elements(normalize(a), max_run);
        std::size_t missing = 0, extra = 0;
        for (const auto& g : window)
            if (std::find(brute.begin(), brute.end(), g) == brute.end()) ++extra;
        for (const auto& g : brute)
            if (pe_encode(a.ctx, g).token_count() <= max_pe_len &&
                std::find(window.begin(), window.end(), g) == window.end())
                ++missing;
        std::cout << "compiled_window=" << window.size() << " brute=" << brute.size()
                  << " missing=" << missing << " extra=" << extra << "\n";
        return missing == 0 && extra == 0 ? 0 : 1;
    }
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const bsq::budget_exceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
