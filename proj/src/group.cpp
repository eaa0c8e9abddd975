#include "bsq/group.hpp"

#include <cctype>
#include <sstream>

namespace bsq {

group_element identity() { return {0_mpz, 0, 0}; }

group_element gen_a(bool inv) { return {inv ? -1_mpz : 1_mpz, 0, 0}; }

group_element gen_t(bool inv) { return {0_mpz, 0, inv ? -1 : 1}; }

static big_int pow_q(const group_context& ctx, std::uint64_t e) {
    big_int r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(ctx.q), e);
    return r;
}

group_element normalized(const group_context& ctx, big_int num, std::int64_t den_exp,
                         std::int64_t cursor) {
    if (den_exp < 0) {
        num *= pow_q(ctx, static_cast<std::uint64_t>(-den_exp));
        den_exp = 0;
    }
    if (num == 0) return {0_mpz, 0, cursor};
    while (den_exp > 0 && mpz_divisible_ui_p(num.get_mpz_t(), ctx.q)) {
        num /= ctx.q;
        --den_exp;
    }
    return {std::move(num), static_cast<std::uint32_t>(den_exp), cursor};
}

group_element multiply(const group_context& ctx, const group_element& g, const group_element& h) {
    // g h = (r + q^m r', m + m') with r = g.num / q^g.den_exp, r' likewise.
    // Over the common denominator q^(g.den_exp + h.den_exp - m) when m < 0.
    big_int num;
    std::int64_t den;
    std::int64_t shift = g.cursor - static_cast<std::int64_t>(h.den_exp) +
                         static_cast<std::int64_t>(g.den_exp);
    if (shift >= 0) {
        num = g.num + h.num * pow_q(ctx, static_cast<std::uint64_t>(shift));
        den = g.den_exp;
    } else {
        num = g.num * pow_q(ctx, static_cast<std::uint64_t>(-shift)) + h.num;
        den = static_cast<std::int64_t>(g.den_exp) - shift;
    }
    return normalized(ctx, std::move(num), den, g.cursor + h.cursor);
}

group_element inverse(const group_context& ctx, const group_element& g) {
    // (r, m)^-1 = (-q^-m r, -m)
    return normalized(ctx, -g.num, static_cast<std::int64_t>(g.den_exp) + g.cursor, -g.cursor);
}

std::string element_to_string(const group_element& g) {
    std::ostringstream os;
    os << '(' << g.num.get_str();
    if (g.den_exp > 0) os << "/q^" << g.den_exp;
    os << ", " << g.cursor << ')';
    return os.str();
}

generator generator_inverse(generator g) {
    switch (g) {
        case generator::a: return generator::a_inv;
        case generator::a_inv: return generator::a;
        case generator::t: return generator::t_inv;
        case generator::t_inv: return generator::t;
    }
    throw std::logic_error("generator_inverse: bad generator");
}

group_element generator_element(generator g) {
    switch (g) {
        case generator::a: return gen_a(false);
        case generator::a_inv: return gen_a(true);
        case generator::t: return gen_t(false);
        case generator::t_inv: return gen_t(true);
    }
    throw std::logic_error("generator_element: bad generator");
}

generator_word parse_word(const std::string& text) {
    generator_word out;
    std::istringstream is(text);
    std::string tok;
    while (is >> tok) {
        if (tok == "1") continue;
        // A token is a juxtaposition of factors a, t, a^<exp>, t^<exp>,
        // so both "t a t" and "tat" denote the same word.
        std::size_t i = 0;
        while (i < tok.size()) {
            char base = tok[i++];
            if (base != 'a' && base != 't')
                throw parse_error("parse_word: bad token '" + tok + "'");
            long long exp = 1;
            if (i < tok.size() && tok[i] == '^') {
                std::size_t j = ++i;
                if (j < tok.size() && (tok[j] == '-' || tok[j] == '+')) ++j;
                while (j < tok.size() && std::isdigit(static_cast<unsigned char>(tok[j]))) ++j;
                try {
                    exp = std::stoll(tok.substr(i, j - i));
                } catch (const std::exception&) {
                    throw parse_error("parse_word: bad exponent in '" + tok + "'");
                }
                i = j;
            }
            generator pos_gen = base == 'a' ? generator::a : generator::t;
            generator use = exp >= 0 ? pos_gen : generator_inverse(pos_gen);
            long long n = exp >= 0 ? exp : -exp;
            for (long long c = 0; c < n; ++c) out.push_back(use);
        }
    }
    return out;
}

std::string word_to_string(const generator_word& w) {
    if (w.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < w.size();) {
        std::size_t j = i;
        while (j < w.size() && w[j] == w[i]) ++j;
        std::size_t n = j - i;
        if (!out.empty()) out += ' ';
        bool inv = w[i] == generator::a_inv || w[i] == generator::t_inv;
        char base = (w[i] == generator::a || w[i] == generator::a_inv) ? 'a' : 't';
        out += base;
        if (inv) out += "^-" + std::to_string(n);
        else if (n > 1) out += "^" + std::to_string(n);
        i = j;
    }
    return out;
}

group_element eval_word(const group_context& ctx, const generator_word& w) {
    group_element acc = identity();
    for (generator g : w) acc = multiply(ctx, acc, generator_element(g));
    return acc;
}

} // namespace bsq
