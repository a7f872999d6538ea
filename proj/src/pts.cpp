#include "stopcert/pts.hpp"

#include <algorithm>
#include <sstream>

namespace stopcert {

std::string Guard::to_string(const VarTable& vars) const {
    if (atoms.empty()) return "true";
    std::ostringstream os;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (i) os << " && ";
        os << atoms[i].to_string(vars);
    }
    return os.str();
}

std::optional<LocId> Pts::location_id(const std::string& name) const {
    auto it = std::find(locations.begin(), locations.end(), name);
    if (it == locations.end()) return std::nullopt;
    return static_cast<LocId>(it - locations.begin());
}

Rational Pts::initial_expectation(const Polynomial& p) const {
    // Independent marginals: E(prod x_i^{e_i}) = prod E(x_i^{e_i}).
    Rational out(0);
    for (auto& [m, c] : p.terms()) {
        Rational t = c;
        for (auto& [v, e] : m.factors()) {
            if (!is_program_var(v))
                throw std::runtime_error("initial_expectation: non-program variable " +
                                         vars.name(v));
            const InitialMarginal& marg = init.at(v);
            if (auto* point = std::get_if<Rational>(&marg)) {
                Rational pw(1);
                for (std::uint32_t i = 0; i < e; ++i) pw *= *point;
                t *= pw;
            } else {
                t *= std::get<Distribution>(marg).raw_moment(e);
            }
        }
        out += t;
    }
    return out;
}

const Transition& Pts::enabled_transition(const Configuration& c) const {
    const Transition* found = nullptr;
    std::size_t count = 0;
    for (auto& t : transitions) {
        if (t.source != c.location) continue;
        if (t.guard.holds(c.valuation)) {
            ++count;
            found = &t;
        }
    }
    if (count == 1) return *found;
    throw EnabledError(count == 0 ? "no enabled transition" : "multiple enabled transitions", c,
                       count);
}

namespace {

// Recognizes the {p >= 0, -p > 0} complement pattern (either strictness
// assignment) between two single-atom guards.
bool complement_pair(const Guard& a, const Guard& b) {
    if (a.atoms.size() != 1 || b.atoms.size() != 1) return false;
    const Inequality& x = a.atoms[0];
    const Inequality& y = b.atoms[0];
    if (!(x.lhs + y.lhs).is_zero()) return false;
    return x.strict != y.strict;
}

}  // namespace

NondemonicReport validate_nondemonic(const Pts& p, std::size_t samples, std::uint64_t seed) {
    NondemonicReport report;
    if (p.trusted) {
        report.skipped_trusted = true;
        return report;
    }
    SplitMix64 rng(seed);
    for (LocId l = 0; l < p.locations.size(); ++l) {
        std::vector<const Transition*> at_l;
        for (auto& t : p.transitions)
            if (t.source == l) at_l.push_back(&t);

        LocationCheck check;
        check.location = l;
        if (at_l.size() == 1 && at_l[0]->guard.is_true()) {
            check.verdict = LocationCheck::Verdict::ExactPass;
            report.checks.push_back(std::move(check));
            continue;
        }
        if (at_l.size() == 2 && complement_pair(at_l[0]->guard, at_l[1]->guard)) {
            check.verdict = LocationCheck::Verdict::ExactPass;
            report.checks.push_back(std::move(check));
            continue;
        }

        // Randomized probing: N(0,1) per coordinate, then one round of
        // branch images of the drawn points to reach update-shaped states.
        std::vector<std::vector<double>> points;
        Distribution std_normal{NormalDist{Rational(0), Rational(1)}};
        for (std::size_t s = 0; s < samples; ++s) {
            std::vector<double> x(p.num_program_vars);
            for (auto& xi : x) xi = std_normal.sample(rng);
            points.push_back(std::move(x));
        }
        std::size_t base_count = points.size();
        for (std::size_t i = 0; i < base_count; ++i) {
            for (auto& t : p.transitions) {
                for (auto& br : t.branches) {
                    std::vector<double> full(p.vars.size(), 0.0);
                    std::copy(points[i].begin(), points[i].end(), full.begin());
                    for (auto& [rv, dist] : p.randoms) full[rv] = dist.sample(rng);
                    std::vector<double> img(p.num_program_vars);
                    for (std::size_t j = 0; j < p.num_program_vars; ++j)
                        img[j] = br.images[j].evaluate_double(full);
                    points.push_back(std::move(img));
                }
            }
        }

        check.verdict = LocationCheck::Verdict::SampledPass;
        for (auto& x : points) {
            std::size_t enabled = 0;
            for (auto* t : at_l)
                if (t->guard.holds(x)) ++enabled;
            if (enabled != 1) {
                check.verdict = LocationCheck::Verdict::Fail;
                check.witness = x;
                check.witness_enabled = enabled;
                break;
            }
        }
        report.checks.push_back(std::move(check));
    }
    return report;
}

}  // namespace stopcert
