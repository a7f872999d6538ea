#pragma once

#include <vector>

#include "stopcert/pts.hpp"

namespace stopcert {

// Location-indexed family of polynomials over the program variables
// (optionally also over the step variable).
struct LocPoly {
    std::vector<Polynomial> at;  // one entry per location

    static LocPoly uniform(const Pts& p, Polynomial poly) {
        LocPoly h;
        h.at.assign(p.locations.size(), std::move(poly));
        return h;
    }
    const Polynomial& operator[](LocId l) const { return at.at(l); }
    Polynomial& operator[](LocId l) { return at.at(l); }
};

struct PiecewisePiece {
    std::size_t transition_index;
    LocId source;
    Polynomial value;  // valid where the transition's guard holds
};

// One piece per transition; at (x, l) the value is the piece of the unique
// enabled transition with source l.
struct PiecewisePoly {
    std::vector<PiecewisePiece> pieces;

    const Polynomial& at(const Pts& p, const Configuration& c) const;
};

// Replaces every power r^a of a random variable by E(r^a). Independent
// random variables factor, so mixed powers become products of moments.
Polynomial moment_substitute(const Pts& p, const Polynomial& poly);

// pre-expectation of h along transition tau:
//   sum_j p_j * E_R( h(F_j(x, R), destination) ),
// computed by substituting the branch images into h at the destination,
// expanding, and replacing random-variable powers by their moments. When
// shift_step is set, the step variable is first advanced to k+1.
Polynomial preexp_transition(const Pts& p, const LocPoly& h, const Transition& tau,
                             bool shift_step = true);

PiecewisePoly preexp_pts(const Pts& p, const LocPoly& h, bool shift_step = true);

enum class DriftVerdict { Yes, No, Unknown };

struct TransitionDrift {
    std::size_t transition_index;
    DriftVerdict verdict;
    Polynomial difference;  // preexp(h, tau) - h at the source
};

enum class DriftMode { Equality, Inequality };

// Per transition, decides whether preexp(h, tau) - h(-, source) is
// identically zero (equality mode) or nonpositive on the guard region
// (inequality mode). Equality is exact coefficient comparison. Inequality is
// sound but incomplete: a nonpositive constant difference is a Yes, an SOS
// certificate on the guard is a Yes, anything else is Unknown.
std::vector<TransitionDrift> check_supermartingale(const Pts& p, const LocPoly& h, DriftMode mode,
                                                   bool shift_step = true);

// Sound semi-decision of `q <= 0 on the guard region`: searches for SOS
// multipliers certifying -q - sum_j s_j * p_j in SOS over the guard atoms
// p_j >= 0. Implemented by the SOS/SDP pipeline; false means unknown.
bool nonpositive_on_guard(const Pts& p, const Polynomial& q, const Guard& g);

}  // namespace stopcert
