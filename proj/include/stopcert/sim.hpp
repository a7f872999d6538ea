#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "stopcert/preexp.hpp"
#include "stopcert/pts.hpp"

namespace stopcert {

// Stop when the final location is reached.
struct ReachFinal {};
// Stop at the first step whose valuation satisfies the condition.
struct ThresholdStop {
    Inequality condition;
};
using StopCondition = std::variant<ReachFinal, ThresholdStop>;

struct RunConfig {
    std::size_t runs = 10000;
    std::size_t max_steps = 1000;  // truncation horizon, >= 1
    std::uint64_t seed = 20210114;
    StopCondition stop = ReachFinal{};
    std::size_t workers = 1;

    RunConfig() = default;
    RunConfig(std::size_t runs, std::size_t max_steps, std::uint64_t seed)
        : runs(runs), max_steps(max_steps), seed(seed) {
        if (max_steps == 0) throw std::invalid_argument("max_steps must be >= 1");
        if (runs == 0) throw std::invalid_argument("runs must be >= 1");
    }
};

struct Trajectory {
    std::vector<Configuration> states;   // configurations 0 .. min(T, max_steps)
    std::optional<std::size_t> hit_step; // empty when truncated at the horizon
};

struct Estimate {
    double mean = 0.0;
    double stderr_of_mean = 0.0;  // sample std / sqrt(runs)
    double truncated_fraction = 0.0;
    std::size_t used_runs = 0;
    bool unreliable = false;  // stop-mode estimate with > 1% truncated runs
};

// Where to evaluate an expression along a run.
struct AtStep {
    std::size_t k;
};
struct AtStop {};
using EvalPoint = std::variant<AtStep, AtStop>;

// Simulates one run with the substream seed ^ run_index; bit-reproducible.
Trajectory simulate_one(const Pts& p, const RunConfig& cfg, std::uint64_t run_index);

// Streams every trajectory through the visitor, in run order.
void simulate(const Pts& p, const RunConfig& cfg,
              const std::function<void(std::size_t, const Trajectory&)>& visit);

// Sample mean and standard error of expr(X^at, L^at). Stop-mode estimates
// exclude truncated runs, report their fraction, and are flagged unreliable
// above 1%. The reduction is chunked by run index, so the result is
// bit-identical for any worker count. The step symbol may appear in expr and
// evaluates to the step index.
Estimate estimate_expectation(const Pts& p, const RunConfig& cfg, const LocPoly& expr,
                              const EvalPoint& at);

// Per-k estimates of E(M_{k+1} - M_k) for the Doob martingale of P, where
// the increment is P(X^{k+1}, L^{k+1}) - preexp(P)(X^k, L^k) pathwise.
std::vector<Estimate> estimate_martingale_drift(const Pts& p, const RunConfig& cfg,
                                                const LocPoly& P, const PiecewisePoly& preP,
                                                std::size_t k_max);

}  // namespace stopcert
