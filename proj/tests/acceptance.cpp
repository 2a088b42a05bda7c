// Acceptance suite: one pass/fail line per criterion, every tolerance exact,
// budgets enforced as wall-clock limits. Exit code 0 iff all criteria hold.

#include "mchain/io.hpp"
#include "mchain/products.hpp"
#include "mchain/suites.hpp"

#include <chrono>
#include <functional>
#include <iostream>

using namespace mchain;

namespace {

int failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void report(int criterion, const std::string& label, bool pass, double secs,
            double budget_secs, const std::string& detail = "") {
    bool in_budget = budget_secs <= 0 || secs <= budget_secs;
    bool ok = pass && in_budget;
    if (!ok) ++failures;
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << criterion << ": " << label;
    std::cout << " [" << static_cast<int>(secs * 1000) << " ms";
    if (budget_secs > 0) std::cout << " / budget " << static_cast<int>(budget_secs) << " s";
    std::cout << "]";
    if (!pass && !detail.empty()) std::cout << " -- " << detail;
    if (pass && !in_budget) std::cout << " -- budget exceeded";
    std::cout << "\n";
}

// Runs a whole verification suite and reports it under one criterion.
void run_suite_criterion(int criterion, const std::string& label, const std::string& suite,
                         uint64_t seed, int cases, double budget_secs) {
    Timer t;
    VerificationReport r = run_suite(suite, seed, cases);
    std::string detail;
    for (const auto& p : r.properties)
        if (!p.pass) detail += p.name + " (" + p.witness + ") ";
    report(criterion, label, r.all_pass(), t.seconds(), budget_secs, detail);
}

SingularChain identity_simplex(int k) {
    Target y = Target::whole_space(k + 1);
    AffineMap id = AffineMap::identity(k + 1);
    return make_singular(CoefficientRing::integers(), k, y, {{Q(1), id}});
}

}  // namespace

int main() {
    // 1. boundary squared on >= 100 seeded random generators over Z and Q
    run_suite_criterion(1, "is_zero(dd[g]) = Zero on >= 100 random generators",
                        "boundary-squared", 20260808, 100, 120);

    // 2. MH_0(point) = R on >= 50 seeded cycles r[*] + d(beta)
    run_suite_criterion(2, "mh0_class(r[*] + d beta) = r on >= 50 cycles", "mh0-point",
                        20260808, 50, 120);

    // 3. vanishing above the target dimension, >= 50 cases
    {
        Timer t;
        bool ok = true;
        std::string detail;
        for (int i = 0; i < 50 && ok; ++i) {
            Rng rng(777000 + static_cast<uint64_t>(i));
            int degree = static_cast<int>(rng.integer(1, 2));
            MChainGenerator g = random_chain_generator(rng, Target::point(), degree, 2);
            Chain c = make_chain(CoefficientRing::integers(), ChainMode::Integral, degree,
                                 Target::point(), {{Q(rng.integer(1, 5)), g}});
            if (!is_zero(c).zero) {
                ok = false;
                detail = "case " + std::to_string(i);
            }
        }
        report(3, "chains on the point with k > 0 vanish (50 cases)", ok, t.seconds(), 0,
               detail);
    }

    // 4. barycentric identity on Delta_1, Delta_2, and a second subdivision
    {
        Timer t;
        bool ok = true;
        std::string detail;
        for (int k : {1, 2}) {
            SingularChain sigma = identity_simplex(k);
            if (!equals(to_mchain(sigma), to_mchain(barycentric(sigma)))) {
                ok = false;
                detail = "first subdivision, k = " + std::to_string(k);
            }
        }
        SingularChain sigma2 = identity_simplex(2);
        SingularChain twice = barycentric(barycentric(sigma2));
        if (twice.terms.size() != 36) {
            ok = false;
            detail = "expected 36 pieces in the second subdivision";
        } else if (!equals(to_mchain(sigma2), to_mchain(twice))) {
            ok = false;
            detail = "second subdivision of Delta_2";
        }
        report(4, "subdivision invariance of the comparison map (36-piece case included)",
               ok, t.seconds(), 300, detail);
    }

    // 5. orientation sign laws and the 1-dimensional boundary-sign identity
    run_suite_criterion(5, "fibre-product sign laws on >= 100 randomized cases each",
                        "sign-laws", 20260808, 100, 0);

    // 6. cup algebra (associativity, Leibniz, identity, pullbacks, involutivity),
    //    rational supercommutativity, and an integral witness against it
    run_suite_criterion(6, "cup algebra on >= 50 random triples", "cup-algebra", 20260808,
                        50, 0);
    run_suite_criterion(6, "involution laws on >= 50 random cochains", "xi-duality",
                        20260808, 50, 0);

    // 7. cap/cross products and the duality square
    run_suite_criterion(7, "cap/cross/duality identities on >= 50 configurations",
                        "cap-cross", 20260808, 50, 0);

    // 8. Mayer-Vietoris operators on >= 25 random cover configurations
    run_suite_criterion(8, "decomposition/extension operators on >= 25 covers", "mv-gluing",
                        20260808, 25, 0);

    // 9. homotopy operator identity on >= 25 random homotopies
    run_suite_criterion(9, "homotopy operator identity on >= 25 homotopies",
                        "singular-bridge", 20260808, 25, 0);

    // 10. de Rham: exact Stokes on >= 100 pairs, the two fixed integrals, and
    //     the integral-pairing cross-validation of the relation engine
    {
        Timer t;
        VerificationReport stokes = run_suite("derham-stokes", 20260808, 100);
        VerificationReport cross = run_suite("derham-crosscheck", 20260808, 25);
        bool ok = stokes.all_pass() && cross.all_pass();
        std::string detail;
        for (const auto& p : stokes.properties)
            if (!p.pass) detail += p.name + " (" + p.witness + ") ";
        for (const auto& p : cross.properties)
            if (!p.pass) detail += p.name + " (" + p.witness + ") ";
        report(10, "Stokes exact on >= 100 pairs; fixed integrals; pairing cross-check", ok,
               t.seconds(), 300, detail);
    }

    if (failures == 0) {
        std::cout << "all acceptance criteria hold\n";
        return 0;
    }
    std::cout << failures << " criterion failure(s)\n";
    return 1;
}
