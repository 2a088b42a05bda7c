#ifndef MCHAIN_SUITES_HPP
#define MCHAIN_SUITES_HPP

#include "mchain/cochains.hpp"
#include "mchain/derham.hpp"
#include "mchain/products.hpp"
#include "mchain/singular.hpp"

#include <cstdint>

namespace mchain {

/// Portable deterministic generator (splitmix64). Identical seeds give
/// identical streams on every platform; documented in the README so other
/// implementations can reproduce the verification cases.
struct Rng {
    uint64_t state;

    explicit Rng(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform-ish integer in [lo, hi] via modulo (documented, portable).
    long integer(long lo, long hi) {
        return lo + static_cast<long>(next() % static_cast<uint64_t>(hi - lo + 1));
    }

    bool flip() { return next() & 1ull; }

    /// Rational with numerator in [-num, num] and denominator in [1, den].
    Q rational(long num, long den) {
        Q r(integer(-num, num), integer(1, den));
        r.canonicalize();
        return r;
    }
};

struct UnknownSuite : std::runtime_error {
    explicit UnknownSuite(const std::string& name)
        : std::runtime_error("unknown suite: " + name) {}
};

struct PropertyResult {
    std::string name;
    int cases = 0;
    bool pass = true;
    std::string witness;  // short failure payload, empty when passing
};

struct VerificationReport {
    std::string suite;
    uint64_t seed = 0;
    int cases = 0;
    std::vector<PropertyResult> properties;
    double wall_ms = 0;  // console only; excluded from the serialized report

    bool all_pass() const {
        for (const auto& p : properties)
            if (!p.pass) return false;
        return true;
    }
};

const std::vector<std::string>& suite_names();
VerificationReport run_suite(const std::string& name, uint64_t seed, int cases);

/// Deterministic report body (the wall time is deliberately not included,
/// so identical (suite, seed, cases) produce byte-identical files).
std::string report_json(const VerificationReport& r);
std::string report_text(const VerificationReport& r);

// Randomized builders shared with the acceptance binary.

Polyhedron random_bounded_piece(Rng& rng, int ambient, int dim);
Polyhedron random_simplex_piece(Rng& rng, int dim);
MChainGenerator random_chain_generator(Rng& rng, const Target& y, int degree, int max_n);
Chain random_zero_chain(Rng& rng, CoefficientRing ring, const Target& y);

}  // namespace mchain

#endif
