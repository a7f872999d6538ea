#include "stopcert/poly.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace stopcert {

VarId VarTable::add(const std::string& name) {
    auto it = index_.find(name);
    if (it != index_.end()) return it->second;
    VarId id = static_cast<VarId>(names_.size());
    names_.push_back(name);
    index_.emplace(name, id);
    return id;
}

std::optional<VarId> VarTable::find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Monomial::Monomial(std::vector<std::pair<VarId, std::uint32_t>> factors)
    : factors_(std::move(factors)) {
    std::sort(factors_.begin(), factors_.end());
    std::vector<std::pair<VarId, std::uint32_t>> merged;
    for (auto& [v, e] : factors_) {
        if (e == 0) continue;
        if (!merged.empty() && merged.back().first == v)
            merged.back().second += e;
        else
            merged.emplace_back(v, e);
    }
    factors_ = std::move(merged);
}

Monomial Monomial::var(VarId v, std::uint32_t exp) {
    Monomial m;
    if (exp > 0) m.factors_.emplace_back(v, exp);
    return m;
}

std::uint32_t Monomial::degree() const {
    std::uint32_t d = 0;
    for (auto& [v, e] : factors_) d += e;
    return d;
}

std::uint32_t Monomial::degree_in(VarId v) const {
    for (auto& [w, e] : factors_)
        if (w == v) return e;
    return 0;
}

Monomial Monomial::operator*(const Monomial& rhs) const {
    Monomial out;
    auto a = factors_.begin(), b = rhs.factors_.begin();
    while (a != factors_.end() || b != rhs.factors_.end()) {
        if (b == rhs.factors_.end() || (a != factors_.end() && a->first < b->first))
            out.factors_.push_back(*a++);
        else if (a == factors_.end() || b->first < a->first)
            out.factors_.push_back(*b++);
        else {
            out.factors_.emplace_back(a->first, a->second + b->second);
            ++a, ++b;
        }
    }
    return out;
}

bool GrlexLess::operator()(const Monomial& a, const Monomial& b) const {
    std::uint32_t da = a.degree(), db = b.degree();
    if (da != db) return da < db;
    auto& fa = a.factors();
    auto& fb = b.factors();
    for (std::size_t i = 0; i < fa.size() && i < fb.size(); ++i) {
        if (fa[i].first != fb[i].first) return fa[i].first > fb[i].first;
        if (fa[i].second != fb[i].second) return fa[i].second < fb[i].second;
    }
    return false;  // equal degree with one a prefix of the other implies equality
}

Polynomial::Polynomial(Rational constant) {
    if (constant != 0) terms_.emplace(Monomial{}, std::move(constant));
}

Polynomial Polynomial::var(VarId v) {
    Polynomial p;
    p.terms_.emplace(Monomial::var(v), Rational(1));
    return p;
}

Polynomial Polynomial::term(Rational coeff, Monomial m) {
    Polynomial p;
    if (coeff != 0) p.terms_.emplace(std::move(m), std::move(coeff));
    return p;
}

bool Polynomial::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_unit());
}

Rational Polynomial::constant_value() const {
    if (terms_.empty()) return Rational(0);
    return terms_.begin()->second;
}

std::uint32_t Polynomial::degree() const {
    if (terms_.empty()) return 0;
    return terms_.rbegin()->first.degree();
}

std::uint32_t Polynomial::degree_in(VarId v) const {
    std::uint32_t d = 0;
    for (auto& [m, c] : terms_) d = std::max(d, m.degree_in(v));
    return d;
}

Rational Polynomial::coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
    Polynomial out = *this;
    for (auto& [m, c] : rhs.terms_) out.add_term(m, c);
    return out;
}

Polynomial Polynomial::operator-(const Polynomial& rhs) const {
    Polynomial out = *this;
    for (auto& [m, c] : rhs.terms_) out.add_term(m, -c);
    return out;
}

Polynomial Polynomial::operator-() const {
    Polynomial out;
    for (auto& [m, c] : terms_) out.terms_.emplace(m, -c);
    return out;
}

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
    Polynomial out;
    for (auto& [ma, ca] : terms_)
        for (auto& [mb, cb] : rhs.terms_) out.add_term(ma * mb, ca * cb);
    return out;
}

Polynomial Polynomial::operator*(const Rational& c) const {
    Polynomial out;
    if (c == 0) return out;
    for (auto& [m, k] : terms_) out.terms_.emplace(m, k * c);
    return out;
}

Polynomial Polynomial::pow(std::uint32_t e) const {
    Polynomial out(Rational(1));
    Polynomial base = *this;
    while (e > 0) {
        if (e & 1u) out = out * base;
        base = base * base;
        e >>= 1u;
    }
    return out;
}

Polynomial Polynomial::substitute(const std::map<VarId, Polynomial>& bindings) const {
    Polynomial out;
    for (auto& [m, c] : terms_) {
        Polynomial term(c);
        for (auto& [v, e] : m.factors()) {
            auto it = bindings.find(v);
            if (it == bindings.end())
                term = term * Polynomial::term(Rational(1), Monomial::var(v, e));
            else
                term = term * it->second.pow(e);
        }
        out = out + term;
    }
    return out;
}

Rational Polynomial::evaluate(const std::map<VarId, Rational>& point) const {
    Rational out(0);
    for (auto& [m, c] : terms_) {
        Rational t = c;
        for (auto& [v, e] : m.factors()) {
            auto it = point.find(v);
            if (it == point.end())
                throw std::runtime_error("evaluate: unbound variable id " + std::to_string(v));
            Rational p(1);
            for (std::uint32_t i = 0; i < e; ++i) p *= it->second;
            t *= p;
        }
        out += t;
    }
    return out;
}

double Polynomial::evaluate_double(const std::vector<double>& point) const {
    double out = 0.0;
    for (auto& [m, c] : terms_) {
        double t = to_double(c);
        for (auto& [v, e] : m.factors()) {
            if (v >= point.size())
                throw std::runtime_error("evaluate: unbound variable id " + std::to_string(v));
            t *= std::pow(point[v], static_cast<int>(e));
        }
        out += t;
    }
    return out;
}

std::string Polynomial::to_string(const VarTable& vars) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        Rational a = c;
        if (first) {
            if (a < 0) {
                os << "-";
                a = -a;
            }
        } else {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        bool unit_coeff = a == 1 && !m.is_unit();
        if (!unit_coeff) os << rational_to_string(a);
        bool lead = unit_coeff;
        for (auto& [v, e] : m.factors()) {
            if (!lead) os << "*";
            lead = false;
            os << vars.name(v);
            if (e > 1) os << "^" << e;
        }
    }
    return os.str();
}

namespace {

// Tokenizer + recursive-descent parser for the polynomial grammar.
struct Lexer {
    const std::string& text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }
    void expect(char c) {
        if (peek() != c)
            throw parse_error(std::string("expected '") + c + "'", pos);
        ++pos;
    }
    bool consume(char c) {
        if (peek() != c) return false;
        ++pos;
        return true;
    }
    std::string number() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos < text.size() && text[pos] == '.') {
            ++pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        } else if (pos < text.size() && text[pos] == '/') {
            std::size_t save = pos;
            ++pos;
            std::size_t dstart = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            if (pos == dstart) pos = save;  // '/': not part of a rational literal
        }
        return text.substr(start, pos - start);
    }
    std::string ident() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        return text.substr(start, pos - start);
    }
};

struct PolyParser {
    Lexer lex;
    const VarTable& vars;

    Polynomial expr() {
        bool neg = lex.consume('-');
        Polynomial acc = term();
        if (neg) acc = -acc;
        for (;;) {
            if (lex.consume('+'))
                acc = acc + term();
            else if (lex.consume('-'))
                acc = acc - term();
            else
                return acc;
        }
    }

    Polynomial term() {
        Polynomial acc = factor();
        while (lex.consume('*')) acc = acc * factor();
        return acc;
    }

    Polynomial factor() {
        Polynomial b = base();
        if (lex.consume('^')) {
            lex.skip_ws();
            if (lex.peek() == '-') throw parse_error("negative exponent", lex.pos);
            std::string n = lex.number();
            if (n.empty() || n.find('.') != std::string::npos || n.find('/') != std::string::npos)
                throw parse_error("expected integer exponent", lex.pos);
            return b.pow(static_cast<std::uint32_t>(std::stoul(n)));
        }
        return b;
    }

    Polynomial base() {
        char c = lex.peek();
        if (c == '(') {
            lex.expect('(');
            Polynomial inner = expr();
            lex.expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t at = lex.pos;
            std::string n = lex.number();
            if (n.empty()) throw parse_error("expected number", at);
            return Polynomial(parse_rational(n));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t at = lex.pos;
            std::string id = lex.ident();
            auto v = vars.find(id);
            if (!v) throw parse_error("unknown identifier '" + id + "'", at);
            return Polynomial::var(*v);
        }
        throw parse_error("unexpected character", lex.pos);
    }
};

}  // namespace

Polynomial parse_polynomial(const std::string& text, const VarTable& vars) {
    PolyParser parser{Lexer{text}, vars};
    Polynomial p = parser.expr();
    parser.lex.skip_ws();
    if (parser.lex.pos != text.size())
        throw parse_error("trailing input", parser.lex.pos);
    return p;
}

Inequality parse_inequality(const std::string& text, const VarTable& vars) {
    static const struct {
        const char* op;
        bool strict;
        bool flip;
    } kRelations[] = {
        {">=", false, false}, {"<=", false, true}, {">", true, false}, {"<", true, true}};
    for (auto& rel : kRelations) {
        auto at = text.find(rel.op);
        if (at == std::string::npos) continue;
        Polynomial lhs = parse_polynomial(text.substr(0, at), vars);
        Polynomial rhs = parse_polynomial(text.substr(at + std::string(rel.op).size()), vars);
        Polynomial canon = rel.flip ? rhs - lhs : lhs - rhs;
        return Inequality{std::move(canon), rel.strict};
    }
    return Inequality{parse_polynomial(text, vars), false};
}

}  // namespace stopcert
