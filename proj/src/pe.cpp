#include "bsq/pe.hpp"

#include <algorithm>
#include <sstream>

namespace bsq {

pe_word pe_encode(const group_context& ctx, const group_element& g) {
    big_int mag = abs(g.num);
    std::vector<int> lsd_digits; // digit of weight q^(j - den_exp) at index j
    while (mag != 0) {
        lsd_digits.push_back(
            static_cast<int>(mpz_fdiv_ui(mag.get_mpz_t(), static_cast<unsigned long>(ctx.q))));
        mag /= ctx.q;
    }
    std::int64_t den = g.den_exp;
    std::int64_t low = 0, high = 0;
    if (!lsd_digits.empty()) {
        low = -den;
        high = static_cast<std::int64_t>(lsd_digits.size()) - 1 - den;
    }
    low = std::min({low, g.cursor, std::int64_t{0}});
    high = std::max({high, g.cursor, std::int64_t{0}});

    pe_word w;
    w.negative = g.num < 0;
    for (std::int64_t p = high; p >= low; --p) {
        std::int64_t j = p + den;
        int d = (j >= 0 && j < static_cast<std::int64_t>(lsd_digits.size()))
                    ? lsd_digits[static_cast<std::size_t>(j)]
                    : 0;
        w.digits.push_back(d);
    }
    w.radix = static_cast<std::size_t>(high);
    w.cursor = static_cast<std::size_t>(high - g.cursor);
    return w;
}

group_element pe_decode(const group_context& ctx, const pe_word& w) {
    if (!pe_valid(ctx, w)) throw std::invalid_argument("pe_decode: invalid word");
    // weight of digits[i] is q^(radix - i); lowest weight is radix - (n-1).
    big_int num = 0;
    for (int d : w.digits) num = num * ctx.q + d;
    if (w.negative) num = -num;
    std::int64_t den = static_cast<std::int64_t>(w.digits.size()) - 1 -
                       static_cast<std::int64_t>(w.radix);
    return normalized(ctx, std::move(num), den, w.cursor_position());
}

bool pe_valid(const group_context& ctx, const pe_word& w) {
    if (w.digits.empty()) return false;
    if (w.radix >= w.digits.size() || w.cursor >= w.digits.size()) return false;
    for (int d : w.digits)
        if (d < 0 || d >= ctx.q) return false;
    return true;
}

bool pe_canonical(const group_context& ctx, const pe_word& w) {
    return pe_valid(ctx, w) && w == pe_canonicalize(ctx, w);
}

pe_word pe_canonicalize(const group_context& ctx, pe_word w) {
    if (!pe_valid(ctx, w)) throw std::invalid_argument("pe_canonicalize: invalid word");
    std::size_t begin = 0, end = w.digits.size();
    while (end - begin > 1 && w.digits[begin] == 0 && w.radix > begin && w.cursor > begin) ++begin;
    while (end - begin > 1 && w.digits[end - 1] == 0 && w.radix < end - 1 && w.cursor < end - 1)
        --end;
    if (begin > 0 || end < w.digits.size()) {
        w.digits = std::vector<int>(w.digits.begin() + static_cast<std::ptrdiff_t>(begin),
                                    w.digits.begin() + static_cast<std::ptrdiff_t>(end));
        w.radix -= begin;
        w.cursor -= begin;
    }
    if (std::all_of(w.digits.begin(), w.digits.end(), [](int d) { return d == 0; }))
        w.negative = false;
    return w;
}

std::string pe_to_text(const pe_word& w) {
    std::string out(1, w.negative ? '-' : '+');
    for (std::size_t i = 0; i < w.digits.size(); ++i) {
        out += ' ';
        out += std::to_string(w.digits[i]);
        if (i == w.radix) out += 'r';
        if (i == w.cursor) out += 'c';
    }
    return out;
}

pe_word pe_from_text(const group_context& ctx, const std::string& text) {
    std::istringstream is(text);
    std::string tok;
    if (!(is >> tok) || (tok != "+" && tok != "-"))
        throw parse_error("pe_from_text: expected sign token");
    pe_word w;
    w.negative = tok == "-";
    bool saw_radix = false, saw_cursor = false;
    while (is >> tok) {
        std::size_t i = 0;
        while (i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i]))) ++i;
        if (i == 0) throw parse_error("pe_from_text: bad digit token '" + tok + "'");
        int d;
        try {
            d = std::stoi(tok.substr(0, i));
        } catch (const std::exception&) {
            throw parse_error("pe_from_text: bad digit token '" + tok + "'");
        }
        bool r = false, c = false;
        if (i < tok.size() && tok[i] == 'r') { r = true; ++i; }
        if (i < tok.size() && tok[i] == 'c') { c = true; ++i; }
        if (i != tok.size()) throw parse_error("pe_from_text: bad digit token '" + tok + "'");
        if (r) {
            if (saw_radix) throw parse_error("pe_from_text: duplicate radix marker");
            saw_radix = true;
            w.radix = w.digits.size();
        }
        if (c) {
            if (saw_cursor) throw parse_error("pe_from_text: duplicate cursor marker");
            saw_cursor = true;
            w.cursor = w.digits.size();
        }
        w.digits.push_back(d);
    }
    if (!saw_radix || !saw_cursor)
        throw parse_error("pe_from_text: missing radix or cursor marker");
    if (!pe_valid(ctx, w)) throw parse_error("pe_from_text: invalid word for q");
    return w;
}

std::string pe_alphabet::name(std::uint32_t sym) const {
    if (sym == 0) return "+";
    if (sym == 1) return "-";
    std::string out = std::to_string(digit_value(sym));
    if (has_radix(sym)) out += 'r';
    if (has_cursor(sym)) out += 'c';
    return out;
}

std::vector<std::string> pe_alphabet::names() const {
    std::vector<std::string> out;
    for (std::uint32_t s = 0; s < size(); ++s) out.push_back(name(s));
    return out;
}

std::vector<std::uint32_t> pe_symbols(const group_context& ctx, const pe_word& w) {
    pe_alphabet al(ctx.q);
    std::vector<std::uint32_t> out;
    out.push_back(pe_alphabet::sign(w.negative));
    for (std::size_t i = 0; i < w.digits.size(); ++i)
        out.push_back(al.digit(w.digits[i], i == w.radix, i == w.cursor));
    return out;
}

pe_word pe_from_symbols(const group_context& ctx, const std::vector<std::uint32_t>& syms) {
    if (syms.empty() || syms[0] > 1)
        throw std::invalid_argument("pe_from_symbols: missing sign symbol");
    pe_word w;
    w.negative = syms[0] == 1;
    bool saw_radix = false, saw_cursor = false;
    for (std::size_t i = 1; i < syms.size(); ++i) {
        std::uint32_t s = syms[i];
        if (!pe_alphabet::is_digit(s))
            throw std::invalid_argument("pe_from_symbols: unexpected sign symbol");
        if (pe_alphabet::has_radix(s)) { w.radix = w.digits.size(); saw_radix = true; }
        if (pe_alphabet::has_cursor(s)) { w.cursor = w.digits.size(); saw_cursor = true; }
        w.digits.push_back(pe_alphabet::digit_value(s));
    }
    if (!saw_radix || !saw_cursor || !pe_valid(ctx, w))
        throw std::invalid_argument("pe_from_symbols: not a valid pe word");
    return w;
}

} // namespace bsq
