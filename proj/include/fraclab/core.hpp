#pragma once

// Core types shared by every module: parameter bundle, error taxonomy,
// deterministic RNG, and small numeric helpers.

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace fraclab {

// ============================= errors =============================

// Raised when an operation is evaluated outside its mathematical domain
// (bad parameters, point outside the set, weight below machine tolerance...).
struct domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised when an iterative/quadrature scheme fails its convergence check.
struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised on malformed run configuration (CLI maps this to exit code 2).
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ============================= parameters =============================

// Dimension N, integrability p, differentiability order s.  Derived values
// ps = p*s and the critical exponent q = Np/(N-ps) are computed on demand;
// individual operations impose their own extra preconditions (e.g. the
// Hardy regime needs ps > 1, the Sobolev embedding needs ps < N).
struct FracParams {
    int    N = 1;
    double p = 2.0;
    double s = 0.75;

    [[nodiscard]] double ps() const { return p * s; }

    [[nodiscard]] double q() const {
        if (!(ps() < N))
            throw domain_error("q undefined: requires ps < N (got ps=" +
                               std::to_string(ps()) + ", N=" + std::to_string(N) + ")");
        return N * p / (N - ps());
    }

    void validate_basic() const {
        if (N < 1 || N > 3) throw domain_error("N must be 1, 2 or 3");
        if (!(p >= 1.0)) throw domain_error("p must be >= 1");
        if (!(s > 0.0 && s < 1.0)) throw domain_error("s must lie in (0,1)");
    }

    // Hardy / HSM regime of the main inequalities.
    void validate_hardy() const {
        validate_basic();
        if (!(ps() > 1.0)) throw domain_error("Hardy regime requires ps > 1");
    }
};

// ============================= rng =============================

// splitmix64: tiny, stable across platforms, and fully specified here so
// that seeded runs are byte-for-byte reproducible forever.
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1), 53-bit resolution
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [lo,hi)
    double next_in(double lo, double hi) { return lo + (hi - lo) * next_double(); }
};

// Derive the seed of trial #i from a master seed; used so that per-trial
// streams are independent of evaluation order and worker count.
[[nodiscard]] inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t index) {
    SplitMix64 g(master ^ (0xa0761d6478bd642fULL + index * 0xe7037ed1a0b428dbULL));
    return g.next_u64();
}

// ============================= hashing =============================

// FNV-1a over bytes; used for config hashes in report provenance.
[[nodiscard]] inline std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// ============================= numeric helpers =============================

inline constexpr double inf = std::numeric_limits<double>::infinity();
inline constexpr double nan = std::numeric_limits<double>::quiet_NaN();
inline constexpr double pi = 3.14159265358979323846;

[[nodiscard]] inline bool close_rel(double a, double b, double rel) {
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

} // namespace fraclab
