#ifndef MCHAIN_CHAINS_HPP
#define MCHAIN_CHAINS_HPP

#include "mchain/corners.hpp"

namespace mchain {

enum class RingKind { Integers, Rationals, IntegersMod };

struct CoefficientRing {
    RingKind kind = RingKind::Integers;
    long modulus = 0;

    static CoefficientRing integers() { return {RingKind::Integers, 0}; }
    static CoefficientRing rationals() { return {RingKind::Rationals, 0}; }
    static CoefficientRing integers_mod(long p);

    bool operator==(const CoefficientRing& o) const = default;
};

/// Validates integrality (Z, Z/p) and reduces mod p to the range [0, p).
Q ring_normalize(const CoefficientRing& ring, const Q& c);
bool ring_is_zero(const CoefficientRing& ring, const Q& c);

struct NotProper : std::runtime_error {
    NotProper() : std::runtime_error("reference map is not proper near the target region") {}
};
struct DimensionMismatch : std::runtime_error {
    explicit DimensionMismatch(const std::string& w) : std::runtime_error(w) {}
};
struct NotACycle : std::runtime_error {
    NotACycle() : std::runtime_error("chain has nonzero boundary") {}
};
struct NonGenericPoint : std::runtime_error {
    NonGenericPoint() : std::runtime_error("evaluation point lies on a degeneracy locus") {}
};
struct InconsistentDegrees : std::runtime_error {
    InconsistentDegrees() : std::runtime_error("degree evaluations disagree across generic points") {}
};
struct RingNotQAlgebra : std::runtime_error {
    RingNotQAlgebra() : std::runtime_error("operation requires rational coefficients") {}
};

/// Generator [V, n, s, t] with a properness certificate for s near 0.
struct MChainGenerator {
    CornersSpace space;
    int n = 0;
    SpaceMap s;
    SpaceMap t;
    Properness properness;

    int degree() const { return space.dim - n; }
};

enum class ChainMode { Integral, Rational };

struct Chain {
    CoefficientRing ring;
    ChainMode mode = ChainMode::Integral;
    int degree = 0;
    Target target;
    std::vector<std::pair<Q, MChainGenerator>> terms;
};

MChainGenerator make_generator(CornersSpace v, int n, SpaceMap s, SpaceMap t);

Chain make_chain(CoefficientRing ring, ChainMode mode, int degree, Target target,
                 std::vector<std::pair<Q, MChainGenerator>> terms);
Chain zero_chain(CoefficientRing ring, ChainMode mode, int degree, Target target);

/// The class [*] scaled by c: c.[R^0, 0, 0, pi] on the point target.
Chain point_chain(CoefficientRing ring, const Q& c);

Chain add(const Chain& a, const Chain& b);
Chain negate(Chain a);
Chain scale_chain(const Q& c, Chain a);

/// Relation (i): ((-1)^{n-slot}, [V x R, n+1, s with pi_R inserted, t . pi_V]).
std::pair<int, MChainGenerator> stabilize(const MChainGenerator& g, int slot);

struct Reduced {
    int sign;
    MChainGenerator gen;
};
/// Detects a split coordinate and removes it; nullopt when irreducible.
std::optional<Reduced> destabilize(const MChainGenerator& g);

/// Re-presents every piece on the canonical basis of its own flat, with the
/// orientation sign pulled out (returned) and the H-representation pruned,
/// scaled and sorted. Single-piece generators become structurally canonical.
std::pair<int, MChainGenerator> canonical_presentation(const MChainGenerator& g);

Chain boundary_chain(const Chain& a);
Chain pushforward(const AffineMap& f, const Target& to, const Chain& a);

/// Full destabilization, canonical presentation, append-stabilization to the
/// common n, the rational coordinate sort (mode Rational), and structural
/// combination of identical generators.
Chain normal_form(const Chain& a);

struct ZeroWitness {
    Flat flat;          // oriented (n+k)-flat class carrying the failure
    Vec point;          // ambient sample point (x, y)
    Q multiplicity;
};

struct ZeroResult {
    bool zero = false;
    Q epsilon;          // properness window used
    int classes = 0;
    int cells_tested = 0;
    std::optional<ZeroWitness> witness;
};

ZeroResult is_zero(const Chain& a);
bool equals(const Chain& a, const Chain& b);

/// One oriented flat class with its cellwise signed multiplicities: the
/// internal normal form the relation decision procedure compares. Cells are
/// listed by their strictly interior sample points in flat coordinates.
struct FlatMultiplicity {
    Flat flat;
    std::vector<std::pair<Vec, Q>> cells;
};

/// The full multiplicity table of a chain (every tested cell, not just the
/// first violation).
std::vector<FlatMultiplicity> flat_multiplicities(const Chain& a);

/// Outer support bound: union over terms and pieces of t[s^{-1}(0)].
std::vector<HPolyhedron> support_bound(const Chain& a);

Chain rational_project(const Chain& a);
Chain rational_section(const Chain& a);

/// Signed preimage count of the reference map over a generic point;
/// degree-0 chains on the point target only.
Q degree_eval(const Chain& a, const Vec& x);

/// The unique r with a ~ r.[*], by degree evaluation at three generic points.
Q mh0_class(const Chain& a);

// Shared relation-(ii) engine, used for chains and (encoded) cochains.

struct EngineTerm {
    Q coeff;
    int n = 0;
    std::vector<Polyhedron> pieces;
    std::vector<AffineMap> smaps;
    std::vector<AffineMap> tmaps;
    std::optional<Q> radius;  // per-term properness radius; nullopt = any
};

enum class ContactRule {
    XZero,                  // cells whose closure meets {x = 0}
    XZeroTargetInterior,    // ... with a point strictly inside the target
};

/// When `collect` is nonnull, every tested cell's multiplicity is recorded
/// there and the run does not stop at the first violation.
ZeroResult relation_engine(const CoefficientRing& ring, const std::vector<EngineTerm>& terms,
                           const Target& y, ContactRule rule,
                           std::vector<FlatMultiplicity>* collect = nullptr);

}  // namespace mchain

#endif
