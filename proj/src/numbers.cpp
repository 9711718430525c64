#include "painleve/numbers.hpp"

#include <cctype>

namespace painleve {

namespace {

bool is_digit_str(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

// "<digits>[.<digits>][e<sign><digits>]" with optional leading sign
std::optional<Rational> parse_decimal(std::string_view s) {
    bool neg = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        neg = s[0] == '-';
        s.remove_prefix(1);
    }
    long exp10 = 0;
    auto epos = s.find_first_of("eE");
    if (epos != std::string_view::npos) {
        std::string etail(s.substr(epos + 1));
        s = s.substr(0, epos);
        try {
            exp10 = std::stol(etail);
        } catch (...) {
            return std::nullopt;
        }
    }
    std::string digits;
    auto dot = s.find('.');
    if (dot == std::string_view::npos) {
        if (!is_digit_str(s)) return std::nullopt;
        digits = std::string(s);
    } else {
        auto ipart = s.substr(0, dot), fpart = s.substr(dot + 1);
        if (ipart.empty() && fpart.empty()) return std::nullopt;
        if (!ipart.empty() && !is_digit_str(ipart)) return std::nullopt;
        if (!fpart.empty() && !is_digit_str(fpart)) return std::nullopt;
        digits = std::string(ipart) + std::string(fpart);
        exp10 -= static_cast<long>(fpart.size());
    }
    if (digits.empty()) return std::nullopt;
    size_t nz = digits.find_first_not_of('0');  // gmp reads a leading 0 as octal
    digits = nz == std::string::npos ? "0" : digits.substr(nz);
    Rational q{Int(digits)};
    Int ten{10};
    if (exp10 > 0)
        q *= Rational(boost::multiprecision::pow(ten, static_cast<unsigned>(exp10)));
    else if (exp10 < 0)
        q /= Rational(boost::multiprecision::pow(ten, static_cast<unsigned>(-exp10)));
    if (neg) q = -q;
    return q;
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) return std::nullopt;
    auto slash = text.find('/');
    if (slash != std::string_view::npos) {
        auto num = parse_decimal(text.substr(0, slash));
        auto den = parse_decimal(text.substr(slash + 1));
        if (!num || !den || *den == 0) return std::nullopt;
        return *num / *den;
    }
    return parse_decimal(text);
}

std::optional<std::pair<Rational, Rational>> parse_complex_rational(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) return std::nullopt;
    if (text.back() != 'i' && text.back() != 'I') {
        auto re = parse_rational(text);
        if (!re) return std::nullopt;
        return std::make_pair(*re, Rational(0));
    }
    text.remove_suffix(1);  // strip 'i'
    // split at the last +/- that is not at position 0 and not part of an exponent
    size_t split = std::string_view::npos;
    for (size_t k = text.size(); k-- > 1;) {
        if ((text[k] == '+' || text[k] == '-') && text[k - 1] != 'e' && text[k - 1] != 'E' &&
            text[k - 1] != '/') {
            split = k;
            break;
        }
    }
    if (split == std::string_view::npos) {
        // pure imaginary: "i", "-i", "3/4i"
        std::string imtxt(text);
        if (imtxt.empty() || imtxt == "+") imtxt = "1";
        else if (imtxt == "-") imtxt = "-1";
        auto im = parse_rational(imtxt);
        if (!im) return std::nullopt;
        return std::make_pair(Rational(0), *im);
    }
    auto re = parse_rational(text.substr(0, split));
    std::string imtxt(text.substr(split));
    if (imtxt == "+") imtxt = "1";
    else if (imtxt == "-") imtxt = "-1";
    auto im = parse_rational(imtxt);
    if (!re || !im) return std::nullopt;
    return std::make_pair(*re, *im);
}

std::string rational_str(const Rational& q) {
    std::string s = numerator(q).str();
    if (denominator(q) != 1) s += "/" + denominator(q).str();
    return s;
}

std::optional<Rational> exact_sqrt(const Rational& q) {
    if (q < 0) return std::nullopt;
    Int n = numerator(q), d = denominator(q);
    Int rn = boost::multiprecision::sqrt(n), rd = boost::multiprecision::sqrt(d);
    if (rn * rn != n || rd * rd != d) return std::nullopt;
    return Rational(rn, rd);
}

}  // namespace painleve
