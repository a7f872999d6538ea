#include "stopcert/sim.hpp"

#include <cmath>
#include <thread>

namespace stopcert {

namespace {

constexpr std::size_t kChunk = 1024;  // fixed partition; keeps reductions order-stable

// Flat double-coefficient form of a polynomial, for the inner loop.
struct CompiledPoly {
    struct Term {
        double coeff;
        std::vector<std::pair<std::uint32_t, std::uint32_t>> powers;
    };
    std::vector<Term> terms;

    static CompiledPoly from(const Polynomial& p) {
        CompiledPoly out;
        for (auto& [m, c] : p.terms()) {
            Term t{to_double(c), {}};
            for (auto& [v, e] : m.factors()) t.powers.emplace_back(v, e);
            out.terms.push_back(std::move(t));
        }
        return out;
    }
    double eval(const std::vector<double>& point) const {
        double acc = 0.0;
        for (auto& t : terms) {
            double v = t.coeff;
            for (auto& [var, exp] : t.powers) {
                double b = point[var];
                for (std::uint32_t i = 0; i < exp; ++i) v *= b;
            }
            acc += v;
        }
        return acc;
    }
};

struct CompiledGuardAtom {
    CompiledPoly lhs;
    bool strict;
    bool holds(const std::vector<double>& x) const {
        double v = lhs.eval(x);
        return strict ? v > 0.0 : v >= 0.0;
    }
};

struct CompiledTransition {
    LocId source;
    LocId destination;
    std::vector<CompiledGuardAtom> guard;
    std::vector<double> branch_cumprob;
    std::vector<std::vector<CompiledPoly>> branch_images;
};

struct CompiledPts {
    const Pts& model;
    std::vector<CompiledTransition> transitions;
    std::vector<std::vector<std::size_t>> by_source;

    explicit CompiledPts(const Pts& p) : model(p), by_source(p.locations.size()) {
        for (std::size_t i = 0; i < p.transitions.size(); ++i) {
            const Transition& t = p.transitions[i];
            CompiledTransition ct;
            ct.source = t.source;
            ct.destination = t.destination;
            for (auto& atom : t.guard.atoms)
                ct.guard.push_back(CompiledGuardAtom{CompiledPoly::from(atom.lhs), atom.strict});
            double cum = 0.0;
            for (auto& b : t.branches) {
                cum += to_double(b.probability);
                ct.branch_cumprob.push_back(cum);
                std::vector<CompiledPoly> images;
                for (auto& img : b.images) images.push_back(CompiledPoly::from(img));
                ct.branch_images.push_back(std::move(images));
            }
            ct.branch_cumprob.back() = 1.0;
            by_source[t.source].push_back(i);
            transitions.push_back(std::move(ct));
        }
    }

    const CompiledTransition& enabled(LocId loc, const std::vector<double>& x,
                                      std::uint64_t step) const {
        const CompiledTransition* found = nullptr;
        std::size_t count = 0;
        for (std::size_t idx : by_source[loc]) {
            const CompiledTransition& t = transitions[idx];
            bool ok = true;
            for (auto& atom : t.guard)
                if (!atom.holds(x)) {
                    ok = false;
                    break;
                }
            if (ok) {
                ++count;
                found = &t;
            }
        }
        if (count != 1)
            throw EnabledError(count == 0 ? "no enabled transition" : "multiple enabled transitions",
                               Configuration{loc, x, step}, count);
        return *found;
    }
};

struct RunState {
    LocId loc;
    std::vector<double> full;  // program vars, then randoms, then step symbol slot
    std::uint64_t step = 0;
};

class Runner {
public:
    Runner(const CompiledPts& cp, const RunConfig& cfg) : cp_(cp), cfg_(cfg) {
        if (auto* th = std::get_if<ThresholdStop>(&cfg.stop))
            threshold_ = CompiledGuardAtom{CompiledPoly::from(th->condition.lhs),
                                           th->condition.strict};
    }

    RunState init_state(SplitMix64& rng) const {
        const Pts& p = cp_.model;
        RunState s;
        s.loc = p.initial_location;
        s.full.assign(p.vars.size(), 0.0);
        for (std::size_t v = 0; v < p.num_program_vars; ++v) {
            if (auto* point = std::get_if<Rational>(&p.init[v]))
                s.full[v] = to_double(*point);
            else
                s.full[v] = std::get<Distribution>(p.init[v]).sample(rng);
        }
        return s;
    }

    bool stopped(const RunState& s) const {
        if (threshold_) return threshold_->holds(s.full);
        return cp_.model.final_location && s.loc == *cp_.model.final_location;
    }

    void step(RunState& s, SplitMix64& rng) const {
        const Pts& p = cp_.model;
        const CompiledTransition& t = cp_.enabled(s.loc, s.full, s.step);
        for (auto& [rv, dist] : p.randoms) s.full[rv] = dist.sample(rng);
        std::size_t branch = 0;
        if (t.branch_cumprob.size() > 1) {
            double u = rng.next_unit();
            while (branch + 1 < t.branch_cumprob.size() && u >= t.branch_cumprob[branch])
                ++branch;
        }
        std::vector<double> next(p.num_program_vars);
        for (std::size_t v = 0; v < p.num_program_vars; ++v)
            next[v] = t.branch_images[branch][v].eval(s.full);
        for (std::size_t v = 0; v < p.num_program_vars; ++v) s.full[v] = next[v];
        s.loc = t.destination;
        ++s.step;
    }

    // Runs to the stop condition or the horizon; returns the hit step if any.
    std::optional<std::size_t> run(std::uint64_t run_index, RunState& out_state) const {
        SplitMix64 rng(cfg_.seed ^ run_index);
        RunState s = init_state(rng);
        for (std::size_t k = 0; k <= cfg_.max_steps; ++k) {
            if (stopped(s)) {
                out_state = s;
                return k;
            }
            if (k == cfg_.max_steps) break;
            step(s, rng);
        }
        out_state = s;
        return std::nullopt;
    }

    const CompiledPts& compiled() const { return cp_; }
    const RunConfig& config() const { return cfg_; }

private:
    const CompiledPts& cp_;
    const RunConfig& cfg_;
    std::optional<CompiledGuardAtom> threshold_;
};

struct Accumulator {
    double sum = 0.0;
    double sumsq = 0.0;
    std::size_t count = 0;
    std::size_t truncated = 0;

    void add(double v) {
        sum += v;
        sumsq += v * v;
        ++count;
    }
    void merge(const Accumulator& o) {
        sum += o.sum;
        sumsq += o.sumsq;
        count += o.count;
        truncated += o.truncated;
    }
};

Estimate finalize(const Accumulator& acc, bool stop_mode) {
    Estimate e;
    e.used_runs = acc.count;
    std::size_t total = acc.count + acc.truncated;
    e.truncated_fraction = total ? static_cast<double>(acc.truncated) / total : 0.0;
    if (acc.count > 0) {
        e.mean = acc.sum / acc.count;
        double var = acc.count > 1
                         ? std::max(0.0, (acc.sumsq - acc.sum * acc.sum / acc.count) /
                                             (acc.count - 1))
                         : 0.0;
        e.stderr_of_mean = std::sqrt(var / acc.count);
    }
    e.unreliable = stop_mode && e.truncated_fraction > 0.01;
    return e;
}

// Applies `body` to every run, chunked by run index; chunks may execute on
// worker threads but are merged in index order.
void for_chunks(const RunConfig& cfg, std::vector<Accumulator>& chunk_acc,
                const std::function<void(std::size_t run, Accumulator&)>& body) {
    std::size_t n_chunks = (cfg.runs + kChunk - 1) / kChunk;
    chunk_acc.assign(n_chunks, Accumulator{});
    auto work = [&](std::size_t chunk) {
        std::size_t lo = chunk * kChunk, hi = std::min(cfg.runs, lo + kChunk);
        for (std::size_t r = lo; r < hi; ++r) body(r, chunk_acc[chunk]);
    };
    std::size_t workers = std::max<std::size_t>(1, cfg.workers);
    if (workers == 1) {
        for (std::size_t c = 0; c < n_chunks; ++c) work(c);
        return;
    }
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t c = w; c < n_chunks; c += workers) work(c);
        });
    for (auto& t : pool) t.join();
}

std::vector<double> eval_point(const Pts& p, const RunState& s) {
    std::vector<double> point = s.full;
    if (p.step_var) point[*p.step_var] = static_cast<double>(s.step);
    return point;
}

}  // namespace

Trajectory simulate_one(const Pts& p, const RunConfig& cfg, std::uint64_t run_index) {
    CompiledPts cp(p);
    Runner runner(cp, cfg);
    SplitMix64 rng(cfg.seed ^ run_index);
    RunState s = runner.init_state(rng);
    Trajectory traj;
    auto record = [&](const RunState& st) {
        traj.states.push_back(Configuration{
            st.loc, std::vector<double>(st.full.begin(), st.full.begin() + p.num_program_vars),
            st.step});
    };
    for (std::size_t k = 0; k <= cfg.max_steps; ++k) {
        record(s);
        if (runner.stopped(s)) {
            traj.hit_step = k;
            break;
        }
        if (k == cfg.max_steps) break;
        runner.step(s, rng);
    }
    return traj;
}

void simulate(const Pts& p, const RunConfig& cfg,
              const std::function<void(std::size_t, const Trajectory&)>& visit) {
    for (std::size_t r = 0; r < cfg.runs; ++r) visit(r, simulate_one(p, cfg, r));
}

Estimate estimate_expectation(const Pts& p, const RunConfig& cfg, const LocPoly& expr,
                              const EvalPoint& at) {
    CompiledPts cp(p);
    Runner runner(cp, cfg);
    std::vector<CompiledPoly> expr_by_loc;
    for (auto& poly : expr.at) expr_by_loc.push_back(CompiledPoly::from(poly));

    bool stop_mode = std::holds_alternative<AtStop>(at);
    std::size_t target_step = stop_mode ? 0 : std::get<AtStep>(at).k;
    if (!stop_mode && target_step > cfg.max_steps)
        throw std::invalid_argument("evaluation step beyond max_steps");

    std::vector<Accumulator> chunks;
    for_chunks(cfg, chunks, [&](std::size_t r, Accumulator& acc) {
        SplitMix64 rng(cfg.seed ^ r);
        RunState s = runner.init_state(rng);
        if (stop_mode) {
            RunState end;
            auto hit = runner.run(r, end);
            if (!hit) {
                ++acc.truncated;
                return;
            }
            acc.add(expr_by_loc[end.loc].eval(eval_point(p, end)));
        } else {
            for (std::size_t k = 0; k < target_step; ++k) runner.step(s, rng);
            acc.add(expr_by_loc[s.loc].eval(eval_point(p, s)));
        }
    });

    Accumulator total;
    for (auto& c : chunks) total.merge(c);
    return finalize(total, stop_mode);
}

std::vector<Estimate> estimate_martingale_drift(const Pts& p, const RunConfig& cfg,
                                                const LocPoly& P, const PiecewisePoly& preP,
                                                std::size_t k_max) {
    CompiledPts cp(p);
    Runner runner(cp, cfg);
    std::vector<CompiledPoly> p_by_loc;
    for (auto& poly : P.at) p_by_loc.push_back(CompiledPoly::from(poly));
    std::vector<CompiledPoly> pre_by_piece;
    for (auto& piece : preP.pieces) pre_by_piece.push_back(CompiledPoly::from(piece.value));

    std::vector<std::vector<Accumulator>> per_k(k_max + 1);
    for (std::size_t k = 0; k <= k_max; ++k) {
        std::vector<Accumulator> chunks;
        for_chunks(cfg, chunks, [&](std::size_t r, Accumulator& acc) {
            SplitMix64 rng(cfg.seed ^ r);
            RunState s = runner.init_state(rng);
            for (std::size_t i = 0; i < k; ++i) runner.step(s, rng);
            // pre-expectation piece of the transition enabled at step k
            const Transition* enabled = nullptr;
            std::size_t idx = 0;
            for (std::size_t t = 0; t < p.transitions.size(); ++t) {
                if (p.transitions[t].source != s.loc) continue;
                if (p.transitions[t].guard.holds(s.full)) {
                    enabled = &p.transitions[t];
                    idx = t;
                    break;
                }
            }
            if (!enabled) throw EnabledError("no enabled transition", Configuration{}, 0);
            double pre = pre_by_piece[idx].eval(eval_point(p, s));
            runner.step(s, rng);
            double next = p_by_loc[s.loc].eval(eval_point(p, s));
            acc.add(next - pre);
        });
        per_k[k] = std::move(chunks);
    }

    std::vector<Estimate> out;
    for (auto& chunks : per_k) {
        Accumulator total;
        for (auto& c : chunks) total.merge(c);
        out.push_back(finalize(total, false));
    }
    return out;
}

}  // namespace stopcert
