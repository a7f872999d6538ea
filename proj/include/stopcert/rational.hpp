#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace stopcert {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Parses "3", "-7", "1/3", "0.05", "-2.5" into an exact rational.
// Decimal literals are read exactly (0.05 == 1/20), never through a double.
Rational parse_rational(const std::string& text);

// Compact form: integers print bare, everything else as "p/q".
std::string rational_to_string(const Rational& q);

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " at position " + std::to_string(pos)), pos_(pos) {}
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

}  // namespace stopcert
