#include "stopcert/moments.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace stopcert {

namespace {

Rational rat_pow(const Rational& x, std::uint32_t e) {
    Rational out(1);
    for (std::uint32_t i = 0; i < e; ++i) out *= x;
    return out;
}

}  // namespace

Distribution::Distribution(Kind kind) : kind_(std::move(kind)) {
    if (auto* u = std::get_if<UniformDist>(&kind_)) {
        if (!(u->a < u->b)) throw std::invalid_argument("uniform: requires a < b");
    } else if (auto* d = std::get_if<DiscreteDist>(&kind_)) {
        if (d->support.empty()) throw std::invalid_argument("discrete: empty support");
        Rational total(0);
        for (auto& [v, p] : d->support) {
            if (p <= 0) throw std::invalid_argument("discrete: probabilities must be positive");
            total += p;
        }
        if (total != 1) throw std::invalid_argument("discrete: probabilities must sum to 1");
    } else if (auto* n = std::get_if<NormalDist>(&kind_)) {
        if (n->sigma2 < 0) throw std::invalid_argument("normal: negative variance");
    }
}

Rational Distribution::raw_moment(std::uint32_t a) const {
    if (a == 0) return Rational(1);
    if (auto* n = std::get_if<NormalDist>(&kind_)) {
        Rational m_prev(1), m_cur = n->mu;
        for (std::uint32_t k = 2; k <= a; ++k) {
            Rational m_next = n->mu * m_cur + Rational(k - 1) * n->sigma2 * m_prev;
            m_prev = m_cur;
            m_cur = m_next;
        }
        return m_cur;
    }
    if (auto* u = std::get_if<UniformDist>(&kind_)) {
        // (b^{a+1} - a^{a+1}) / ((a+1)(b-a))
        return (rat_pow(u->b, a + 1) - rat_pow(u->a, a + 1)) /
               (Rational(a + 1) * (u->b - u->a));
    }
    if (auto* d = std::get_if<DiscreteDist>(&kind_)) {
        Rational out(0);
        for (auto& [v, p] : d->support) out += p * rat_pow(v, a);
        return out;
    }
    return rat_pow(std::get<ConstantDist>(kind_).c, a);
}

double Distribution::mean_abs_deviation() const {
    if (auto* n = std::get_if<NormalDist>(&kind_)) {
        return std::sqrt(to_double(n->sigma2)) * std::sqrt(2.0 / std::numbers::pi);
    }
    if (auto* u = std::get_if<UniformDist>(&kind_)) {
        return to_double((u->b - u->a) / 4);
    }
    if (auto* d = std::get_if<DiscreteDist>(&kind_)) {
        Rational mu = mean(), out(0);
        for (auto& [v, p] : d->support) out += p * (v >= mu ? v - mu : mu - v);
        return to_double(out);
    }
    return 0.0;
}

double Distribution::sample(SplitMix64& rng) const {
    if (auto* n = std::get_if<NormalDist>(&kind_)) {
        // Box-Muller; u1 kept away from 0 so the log is finite.
        double u1 = rng.next_unit(), u2 = rng.next_unit();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
        return to_double(n->mu) + std::sqrt(to_double(n->sigma2)) * z;
    }
    if (auto* u = std::get_if<UniformDist>(&kind_)) {
        double a = to_double(u->a), b = to_double(u->b);
        return a + (b - a) * rng.next_unit();
    }
    if (auto* d = std::get_if<DiscreteDist>(&kind_)) {
        // Inverse CDF over the support in declaration order.
        double u = rng.next_unit(), cum = 0.0;
        for (auto& [v, p] : d->support) {
            cum += to_double(p);
            if (u < cum) return to_double(v);
        }
        return to_double(d->support.back().first);
    }
    return to_double(std::get<ConstantDist>(kind_).c);
}

std::string Distribution::describe() const {
    std::ostringstream os;
    if (auto* n = std::get_if<NormalDist>(&kind_))
        os << "normal(" << rational_to_string(n->mu) << ", " << rational_to_string(n->sigma2)
           << ")";
    else if (auto* u = std::get_if<UniformDist>(&kind_))
        os << "uniform(" << rational_to_string(u->a) << ", " << rational_to_string(u->b) << ")";
    else if (auto* d = std::get_if<DiscreteDist>(&kind_)) {
        os << "discrete{";
        bool first = true;
        for (auto& [v, p] : d->support) {
            if (!first) os << ", ";
            first = false;
            os << rational_to_string(v) << ": " << rational_to_string(p);
        }
        os << "}";
    } else
        os << "constant(" << rational_to_string(std::get<ConstantDist>(kind_).c) << ")";
    return os.str();
}

}  // namespace stopcert
