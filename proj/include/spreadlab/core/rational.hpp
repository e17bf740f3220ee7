#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

#include "error.hpp"

namespace spreadlab {

// Expression templates are disabled so `auto` and std::min/max behave as for ordinary values.
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                             boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<
    boost::multiprecision::rational_adaptor<boost::multiprecision::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

inline Rational frac(std::int64_t num, std::int64_t den) {
    require(den != 0, "zero denominator");
    return Rational(BigInt(num), BigInt(den));
}

inline Rational frac_u128(unsigned __int128 num, unsigned __int128 den) {
    auto to_big = [](unsigned __int128 v) {
        BigInt out = static_cast<std::uint64_t>(v >> 64);
        out <<= 64;
        out += static_cast<std::uint64_t>(v);
        return out;
    };
    require(den != 0, "zero denominator");
    return Rational(to_big(num), to_big(den));
}

inline Rational pow2(int e) {
    BigInt p = 1;
    if (e >= 0) return Rational(p << e);
    return Rational(BigInt(1), p << (-e));
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

// "p/q" in lowest terms, or "p" when the denominator is one.
inline std::string to_string(const Rational& r) { return r.str(); }

// Accepts "p/q", an integer, or a finite decimal such as "0.25"; the result is exact.
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    auto bad = [&]() { return InputError("cannot parse rational: '" + s + "'"); };
    if (s.empty()) throw bad();
    auto slash = s.find('/');
    auto parse_int = [&](const std::string& t) {
        if (t.empty()) throw bad();
        std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (i == t.size()) throw bad();
        for (std::size_t j = i; j < t.size(); ++j)
            if (t[j] < '0' || t[j] > '9') throw bad();
        return BigInt(t);
    };
    if (slash != std::string::npos) {
        BigInt num = parse_int(s.substr(0, slash));
        BigInt den = parse_int(s.substr(slash + 1));
        if (den == 0) throw bad();
        return Rational(num, den);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(parse_int(s));
    std::string whole = s.substr(0, dot);
    std::string fraction = s.substr(dot + 1);
    if (fraction.empty() || whole == "-" || whole == "+") throw bad();
    if (whole.empty()) whole = "0";
    bool negative = whole[0] == '-';
    BigInt w = parse_int(whole);
    BigInt f = parse_int(fraction);
    if (fraction[0] == '-' || fraction[0] == '+') throw bad();
    BigInt scale = 1;
    for (std::size_t i = 0; i < fraction.size(); ++i) scale *= 10;
    Rational out = Rational(w < 0 ? -w : w) + Rational(f, scale);
    return negative ? -out : out;
}

inline BigInt floor_of(const Rational& r) {
    BigInt q = boost::multiprecision::numerator(r) / boost::multiprecision::denominator(r);
    if (r < 0 && Rational(q) != r) q -= 1;
    return q;
}

inline BigInt ceil_of(const Rational& r) {
    BigInt f = floor_of(r);
    return Rational(f) == r ? f : f + 1;
}

} // namespace spreadlab
