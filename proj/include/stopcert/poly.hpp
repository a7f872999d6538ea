#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stopcert/rational.hpp"

namespace stopcert {

using VarId = std::uint32_t;

// Ordered universe of variable names; ids follow declaration order.
class VarTable {
public:
    VarId add(const std::string& name);
    std::optional<VarId> find(const std::string& name) const;
    const std::string& name(VarId id) const { return names_.at(id); }
    std::size_t size() const { return names_.size(); }

private:
    std::vector<std::string> names_;
    std::map<std::string, VarId> index_;
};

// Product of variable powers; factors sorted by variable id, no zero exponents.
class Monomial {
public:
    Monomial() = default;
    explicit Monomial(std::vector<std::pair<VarId, std::uint32_t>> factors);
    static Monomial var(VarId v, std::uint32_t exp = 1);

    std::uint32_t degree() const;
    std::uint32_t degree_in(VarId v) const;
    bool is_unit() const { return factors_.empty(); }
    const std::vector<std::pair<VarId, std::uint32_t>>& factors() const { return factors_; }

    Monomial operator*(const Monomial& rhs) const;
    bool operator==(const Monomial& rhs) const { return factors_ == rhs.factors_; }

private:
    std::vector<std::pair<VarId, std::uint32_t>> factors_;
};

// Graded-lexicographic order: compare total degree first, then the earliest
// variable with a differing exponent wins.
struct GrlexLess {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

// Sparse multivariate polynomial with exact rational coefficients.
// Zero coefficients are never stored; the zero polynomial has no terms.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(Rational constant);
    static Polynomial var(VarId v);
    static Polynomial term(Rational coeff, Monomial m);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_value() const;  // requires is_constant()
    std::uint32_t degree() const;
    std::uint32_t degree_in(VarId v) const;
    std::size_t term_count() const { return terms_.size(); }
    const std::map<Monomial, Rational, GrlexLess>& terms() const { return terms_; }
    Rational coefficient(const Monomial& m) const;

    Polynomial operator+(const Polynomial& rhs) const;
    Polynomial operator-(const Polynomial& rhs) const;
    Polynomial operator-() const;
    Polynomial operator*(const Polynomial& rhs) const;
    Polynomial operator*(const Rational& c) const;
    Polynomial pow(std::uint32_t e) const;
    bool operator==(const Polynomial& rhs) const { return terms_ == rhs.terms_; }

    void add_term(const Monomial& m, const Rational& c);

    // Replaces bound variables by their images, fully expanded; unbound
    // variables pass through unchanged.
    Polynomial substitute(const std::map<VarId, Polynomial>& bindings) const;

    Rational evaluate(const std::map<VarId, Rational>& point) const;
    double evaluate_double(const std::vector<double>& point) const;

    std::string to_string(const VarTable& vars) const;

private:
    std::map<Monomial, Rational, GrlexLess> terms_;
};

inline Polynomial operator*(const Rational& c, const Polynomial& p) { return p * c; }

// Guard atom in canonical form: lhs >= 0 or lhs > 0.
struct Inequality {
    Polynomial lhs;
    bool strict = false;

    bool holds(const std::vector<double>& point) const {
        double v = lhs.evaluate_double(point);
        return strict ? v > 0.0 : v >= 0.0;
    }
    std::string to_string(const VarTable& vars) const {
        return lhs.to_string(vars) + (strict ? " > 0" : " >= 0");
    }
};

// Recursive-descent parser for the expression grammar
//   expr   := ['-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := base ('^' uint)?
//   base   := rational | ident | '(' expr ')'
// Unknown identifiers and negative exponents are reported with positions.
Polynomial parse_polynomial(const std::string& text, const VarTable& vars);

// Parses "p >= q", "p > q", "p <= q", "p < q" into canonical `lhs (>|>=) 0`
// form, or a bare expression meaning `expr >= 0`.
Inequality parse_inequality(const std::string& text, const VarTable& vars);

}  // namespace stopcert
