#pragma once

// Exact rational input ("5/2", "2.5", "-3", "1e3") and output (terminating
// decimals stay decimal, anything else prints as p/q).

#include <string>

#include "pftl/errors.hpp"
#include "pftl/interval.hpp"

namespace pftl {

inline Rational parse_rational(const std::string& text) {
    auto fail = [&]() -> Rational { throw DomainError("not a rational number: '" + text + "'"); };
    if (text.empty()) return fail();
    if (auto slash = text.find('/'); slash != std::string::npos) {
        Integer n, d;
        if (n.set_str(text.substr(0, slash), 10) != 0 || d.set_str(text.substr(slash + 1), 10) != 0) return fail();
        if (d == 0) return fail();
        return make_rational(n, d);
    }
    std::string mant = text;
    long exp10 = 0;
    if (auto e = text.find_first_of("eE"); e != std::string::npos) {
        try {
            std::size_t used = 0;
            exp10 = std::stol(text.substr(e + 1), &used);
            if (used != text.size() - e - 1) return fail();
        } catch (const std::exception&) {
            return fail();
        }
        mant = text.substr(0, e);
    }
    std::string digits = mant;
    if (auto dot = mant.find('.'); dot != std::string::npos) {
        digits = mant.substr(0, dot) + mant.substr(dot + 1);
        exp10 -= static_cast<long>(mant.size() - dot - 1);
    }
    if (digits.empty() || digits == "-" || digits == "+") return fail();
    if (digits[0] == '+') digits.erase(0, 1);
    Integer n;
    if (n.set_str(digits, 10) != 0) return fail();
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
    return exp10 < 0 ? make_rational(n, scale) : Rational(n * scale);
}

inline std::string format_rational(const Rational& q) {
    Integer den = q.get_den();
    unsigned twos = 0, fives = 0;
    while (den % 2 == 0) den /= 2, ++twos;
    while (den % 5 == 0) den /= 5, ++fives;
    if (den != 1) return q.get_str();
    const unsigned places = std::max(twos, fives);
    if (places == 0) return q.get_num().get_str();
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, places);
    const Integer scaled = q.get_num() * scale / q.get_den();
    std::string digits = Integer(abs(scaled)).get_str();
    if (digits.size() <= places) digits.insert(0, places - digits.size() + 1, '0');
    digits.insert(digits.size() - places, ".");
    return (scaled < 0 ? "-" : "") + digits;
}

}  // namespace pftl
