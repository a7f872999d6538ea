#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "stopcert/rational.hpp"

namespace stopcert {

// SplitMix64 (Steele, Lea & Flood 2014). One stream per simulation run;
// substreams are derived as seed ^ run-index.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    // Uniform in [0, 1) with 53-bit resolution.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

struct NormalDist {
    Rational mu;
    Rational sigma2;  // variance, must be >= 0
};
struct UniformDist {
    Rational a;
    Rational b;  // a < b
};
struct DiscreteDist {
    std::vector<std::pair<Rational, Rational>> support;  // (value, probability), probs sum to 1
};
struct ConstantDist {
    Rational c;
};

// Distribution of one random variable. All raw moments of every finite
// order exist and are closed-form rationals.
class Distribution {
public:
    using Kind = std::variant<NormalDist, UniformDist, DiscreteDist, ConstantDist>;

    explicit Distribution(Kind kind);

    // E(r^a), exact. Normal uses m_a = mu*m_{a-1} + (a-1)*sigma2*m_{a-2}.
    Rational raw_moment(std::uint32_t a) const;
    Rational mean() const { return raw_moment(1); }

    // E|r - E(r)|. Exact for uniform/discrete/constant; sigma*sqrt(2/pi)
    // for the normal case, hence double.
    double mean_abs_deviation() const;

    double sample(SplitMix64& rng) const;

    const Kind& kind() const { return kind_; }
    std::string describe() const;

private:
    Kind kind_;
};

}  // namespace stopcert
