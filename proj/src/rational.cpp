#include "branchtree/rational.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <stdexcept>

namespace branchtree {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

mpz_class parse_integer(std::string_view s, std::string_view original) {
    bool negative = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s))
        throw std::invalid_argument("invalid rational: '" + std::string(original) + "'");
    mpz_class value(std::string(s), 10);
    return negative ? mpz_class(-value) : value;
}

mpz_class pow10(unsigned long exp) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, exp);
    return r;
}

// [sign] digits [ '.' digits ] [ (e|E) [sign] digits ], at least one digit
// around the decimal point.
Rational parse_decimal(std::string_view s, std::string_view original) {
    bool negative = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }

    long exponent = 0;
    if (auto epos = s.find_first_of("eE"); epos != std::string_view::npos) {
        std::string_view etext = s.substr(epos + 1);
        s = s.substr(0, epos);
        bool eneg = false;
        if (!etext.empty() && (etext.front() == '+' || etext.front() == '-')) {
            eneg = etext.front() == '-';
            etext.remove_prefix(1);
        }
        if (!all_digits(etext) || etext.size() > 9)
            throw std::invalid_argument("invalid rational: '" + std::string(original) + "'");
        auto [ptr, ec] = std::from_chars(etext.data(), etext.data() + etext.size(), exponent);
        if (ec != std::errc())
            throw std::invalid_argument("invalid rational: '" + std::string(original) + "'");
        if (eneg) exponent = -exponent;
        if (exponent > 10000 || exponent < -10000)
            throw std::invalid_argument("exponent out of range in '" + std::string(original) + "'");
    }

    std::string_view int_part = s;
    std::string_view frac_part;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        int_part = s.substr(0, dot);
        frac_part = s.substr(dot + 1);
    }
    if (int_part.empty() && frac_part.empty())
        throw std::invalid_argument("invalid rational: '" + std::string(original) + "'");
    if ((!int_part.empty() && !all_digits(int_part)) ||
        (!frac_part.empty() && !all_digits(frac_part)))
        throw std::invalid_argument("invalid rational: '" + std::string(original) + "'");

    std::string digits;
    digits.reserve(int_part.size() + frac_part.size());
    digits.append(int_part);
    digits.append(frac_part);
    mpz_class mantissa = digits.empty() ? mpz_class(0) : mpz_class(digits, 10);
    if (negative) mantissa = -mantissa;

    long scale = static_cast<long>(frac_part.size()) - exponent;
    Rational result;
    if (scale >= 0)
        result = Rational(mantissa, pow10(static_cast<unsigned long>(scale)));
    else
        result = Rational(mantissa * pow10(static_cast<unsigned long>(-scale)), 1);
    result.canonicalize();
    return result;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view s = trim(text);
    if (s.empty()) throw std::invalid_argument("empty rational");

    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        mpz_class num = parse_integer(trim(s.substr(0, slash)), text);
        mpz_class den = parse_integer(trim(s.substr(slash + 1)), text);
        if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        Rational r(num, den);
        r.canonicalize();
        return r;
    }
    if (s.find_first_of(".eE") != std::string_view::npos) return parse_decimal(s, text);
    return Rational(parse_integer(s, text), 1);
}

std::string to_string(const Rational& value) {
    return value.get_str();
}

double to_double(const Rational& value) {
    return value.get_d();
}

std::string shortest_decimal(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) throw std::invalid_argument("unrepresentable double");
    return std::string(buf, ptr);
}

}  // namespace branchtree
