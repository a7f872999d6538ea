#include "stopcert/rational.hpp"

#include <cctype>

namespace stopcert {

namespace {

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
    std::string s = text;
    bool negative = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        negative = s[0] == '-';
        s.erase(0, 1);
    }
    if (s.empty()) throw parse_error("empty rational literal", 0);

    Rational value;
    auto slash = s.find('/');
    auto dot = s.find('.');
    if (slash != std::string::npos) {
        std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            throw parse_error("malformed rational '" + text + "'", 0);
        BigInt d(den);
        if (d == 0) throw parse_error("zero denominator in '" + text + "'", slash + 1);
        value = Rational(BigInt(num), d);
    } else if (dot != std::string::npos) {
        std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
        if (ip.empty()) ip = "0";
        if (!all_digits(ip) || !all_digits(fp))
            throw parse_error("malformed decimal '" + text + "'", 0);
        BigInt den = 1;
        for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
        value = Rational(BigInt(ip) * den + (fp.empty() ? BigInt(0) : BigInt(fp)), den);
    } else {
        if (!all_digits(s)) throw parse_error("malformed integer '" + text + "'", 0);
        value = Rational(BigInt(s));
    }
    return negative ? Rational(-value) : value;
}

std::string rational_to_string(const Rational& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

}  // namespace stopcert
