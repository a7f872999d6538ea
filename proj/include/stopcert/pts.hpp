#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "stopcert/moments.hpp"
#include "stopcert/poly.hpp"

namespace stopcert {

using Json = nlohmann::ordered_json;
using LocId = std::uint32_t;

// Conjunction of inequality atoms; empty list means `true`.
struct Guard {
    std::vector<Inequality> atoms;

    bool holds(const std::vector<double>& point) const {
        for (auto& a : atoms)
            if (!a.holds(point)) return false;
        return true;
    }
    bool is_true() const { return atoms.empty(); }
    std::string to_string(const VarTable& vars) const;
};

struct UpdateBranch {
    Rational probability;             // in (0, 1]
    std::vector<Polynomial> images;   // one per program variable, over X and R
};

struct Transition {
    LocId source;
    Guard guard;
    std::vector<UpdateBranch> branches;  // probabilities sum to exactly 1
    LocId destination;
};

struct Configuration {
    LocId location;
    std::vector<double> valuation;  // one entry per program variable
    std::uint64_t step = 0;
};

// Initial value of one program variable: point mass or full distribution;
// marginals are independent across variables.
using InitialMarginal = std::variant<Rational, Distribution>;

// Probabilistic transition system over real-valued program variables with
// guarded transitions, probabilistic branch choice, and i.i.d. random samples.
class Pts {
public:
    VarTable vars;  // program variables, then random variables, then the step symbol
    std::size_t num_program_vars = 0;
    std::vector<std::pair<VarId, Distribution>> randoms;
    // Step counter symbol for expressions like "x1 - 2.5*k". Not a program
    // variable; guards and updates must not mention it.
    std::optional<VarId> step_var;
    std::vector<std::string> locations;
    LocId initial_location = 0;
    std::optional<LocId> final_location;  // absent for structurally non-terminating models
    std::vector<InitialMarginal> init;    // one per program variable
    std::vector<Transition> transitions;
    bool trusted = false;

    const std::string& location_name(LocId l) const { return locations.at(l); }
    std::optional<LocId> location_id(const std::string& name) const;
    bool is_program_var(VarId v) const { return v < num_program_vars; }

    // Exact expectation of a polynomial over program variables under the
    // initial distribution (independent marginals).
    Rational initial_expectation(const Polynomial& p) const;

    // The unique transition enabled at c; throws EnabledError when zero or
    // several guards hold (a demonic model that slipped past validation).
    const Transition& enabled_transition(const Configuration& c) const;
};

class EnabledError : public std::runtime_error {
public:
    EnabledError(std::string what, Configuration at, std::size_t count)
        : std::runtime_error(std::move(what)), at(std::move(at)), enabled_count(count) {}
    Configuration at;
    std::size_t enabled_count;
};

struct LocationCheck {
    enum class Verdict { ExactPass, SampledPass, Fail };
    LocId location;
    Verdict verdict;
    std::vector<double> witness;      // point where 0 or >= 2 guards hold (Fail only)
    std::size_t witness_enabled = 0;  // how many transitions the witness enables
};

struct NondemonicReport {
    std::vector<LocationCheck> checks;
    bool skipped_trusted = false;

    bool ok() const {
        for (auto& c : checks)
            if (c.verdict == LocationCheck::Verdict::Fail) return false;
        return true;
    }
    bool all_exact() const {
        for (auto& c : checks)
            if (c.verdict != LocationCheck::Verdict::ExactPass) return false;
        return true;
    }
};

// Checks determinacy: at every location exactly one guard holds. Recognizes
// syntactic complement pairs {p >= 0, -p > 0} exactly; otherwise samples
// random valuations (standard normal per coordinate, plus branch images of
// previously drawn points). Models marked trusted skip the sampling.
NondemonicReport validate_nondemonic(const Pts& p, std::size_t samples, std::uint64_t seed);

// Loads the documented "stopcert-pts/1" JSON schema. Guards written with a
// top-level {"or": [...]} node are split into one transition per disjunct.
// A final location without outgoing transitions gets an identity self-loop
// so the semantics is total.
Pts load_pts(const Json& document);
Pts load_pts_file(const std::string& path);
Json save_pts(const Pts& p);

}  // namespace stopcert
