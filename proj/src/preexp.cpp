#include "stopcert/preexp.hpp"

namespace stopcert {

const Polynomial& PiecewisePoly::at(const Pts& p, const Configuration& c) const {
    for (auto& piece : pieces) {
        const Transition& t = p.transitions[piece.transition_index];
        if (t.source == c.location && t.guard.holds(c.valuation)) return piece.value;
    }
    throw std::runtime_error("piecewise value: no enabled piece at location " +
                             p.location_name(c.location));
}

Polynomial moment_substitute(const Pts& p, const Polynomial& poly) {
    Polynomial out;
    for (auto& [m, c] : poly.terms()) {
        Rational coeff = c;
        std::vector<std::pair<VarId, std::uint32_t>> kept;
        for (auto& [v, e] : m.factors()) {
            bool is_random = false;
            for (auto& [rv, dist] : p.randoms) {
                if (rv == v) {
                    coeff *= dist.raw_moment(e);
                    is_random = true;
                    break;
                }
            }
            if (!is_random) kept.emplace_back(v, e);
        }
        out.add_term(Monomial(std::move(kept)), coeff);
    }
    return out;
}

Polynomial preexp_transition(const Pts& p, const LocPoly& h, const Transition& tau,
                             bool shift_step) {
    const Polynomial& dest = h[tau.destination];
    Polynomial acc;
    for (auto& branch : tau.branches) {
        std::map<VarId, Polynomial> bindings;
        for (std::size_t v = 0; v < p.num_program_vars; ++v)
            bindings.emplace(static_cast<VarId>(v), branch.images[v]);
        if (shift_step && p.step_var)
            bindings.emplace(*p.step_var,
                             Polynomial::var(*p.step_var) + Polynomial(Rational(1)));
        Polynomial composed = dest.substitute(bindings);
        acc = acc + moment_substitute(p, composed) * branch.probability;
    }
    return acc;
}

PiecewisePoly preexp_pts(const Pts& p, const LocPoly& h, bool shift_step) {
    PiecewisePoly out;
    for (std::size_t i = 0; i < p.transitions.size(); ++i) {
        const Transition& tau = p.transitions[i];
        out.pieces.push_back(
            PiecewisePiece{i, tau.source, preexp_transition(p, h, tau, shift_step)});
    }
    return out;
}

std::vector<TransitionDrift> check_supermartingale(const Pts& p, const LocPoly& h, DriftMode mode,
                                                   bool shift_step) {
    std::vector<TransitionDrift> out;
    for (std::size_t i = 0; i < p.transitions.size(); ++i) {
        const Transition& tau = p.transitions[i];
        Polynomial diff = preexp_transition(p, h, tau, shift_step) - h[tau.source];
        TransitionDrift drift{i, DriftVerdict::Unknown, diff};
        if (mode == DriftMode::Equality) {
            drift.verdict = diff.is_zero() ? DriftVerdict::Yes : DriftVerdict::No;
        } else {
            if (diff.is_constant())
                drift.verdict =
                    diff.constant_value() <= 0 ? DriftVerdict::Yes : DriftVerdict::No;
            else
                drift.verdict = nonpositive_on_guard(p, diff, tau.guard)
                                    ? DriftVerdict::Yes
                                    : DriftVerdict::Unknown;
        }
        out.push_back(std::move(drift));
    }
    return out;
}

}  // namespace stopcert
