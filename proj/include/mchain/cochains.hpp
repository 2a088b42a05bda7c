#ifndef MCHAIN_COCHAINS_HPP
#define MCHAIN_COCHAINS_HPP

#include "mchain/chains.hpp"

namespace mchain {

enum class CochainVariant { Precochain, CompactlySupported, LocallyFiniteChain };

struct NotSubmersion : std::runtime_error {
    NotSubmersion() : std::runtime_error("map is not a submersion on every face") {}
};
struct NotProperMap : std::runtime_error {
    NotProperMap() : std::runtime_error("map between targets is not proper") {}
};
struct SupportEscapes : std::runtime_error {
    SupportEscapes() : std::runtime_error("support is not contained in the open subset") {}
};
struct BadCutFunction : std::runtime_error {
    BadCutFunction() : std::runtime_error("cut function does not separate the cover") {}
};

/// Generator [V, n, s, t]. The coorientation of t is stored as the
/// orientation of V against the standard orientation of the target, so
/// Poincare duality is a retag and the relation engine is shared.
struct MCochainGenerator {
    CornersSpace space;
    int n = 0;
    SpaceMap s;
    SpaceMap t;
    Properness properness;
    CochainVariant variant = CochainVariant::Precochain;

    int degree() const {
        return variant == CochainVariant::LocallyFiniteChain
                   ? space.dim - n
                   : t.target.ambient + n - space.dim;
    }
};

struct Cochain {
    CoefficientRing ring;
    ChainMode mode = ChainMode::Integral;
    CochainVariant variant = CochainVariant::Precochain;
    int degree = 0;
    Target target;
    std::vector<std::pair<Q, MCochainGenerator>> terms;
};

MCochainGenerator make_cochain_generator(CornersSpace v, int n, SpaceMap s, SpaceMap t,
                                         CochainVariant variant);

Cochain make_cochain(CoefficientRing ring, ChainMode mode, CochainVariant variant, int degree,
                     Target target, std::vector<std::pair<Q, MCochainGenerator>> terms);
Cochain zero_cochain(CoefficientRing ring, ChainMode mode, CochainVariant variant, int degree,
                     Target target);

/// Id_Y = [Y, 0, 0, id_Y] on a domain target.
Cochain identity_cocycle(CoefficientRing ring, ChainMode mode, const Target& y);

Cochain add(const Cochain& a, const Cochain& b);
Cochain negate(Cochain a);
Cochain scale_cochain(const Q& c, Cochain a);

Cochain coboundary(const Cochain& a);

/// f^*[V,n,s,t] = [V x_{t,Y2,f} Y1, n, s.pi_V, pi_{Y1}] for f : Y1 -> Y2.
/// The compactly-supported variant additionally requires f proper.
Cochain pullback(const AffineMap& f, const Target& from, const Cochain& a);

/// Extension by the inclusion of an open subset (compact variant only).
Cochain open_pushforward(const Target& into, const Cochain& a);

/// Restriction of locally finite prechains to an open subset.
Cochain lf_pullback(const Target& u, const Cochain& a);

ZeroResult is_zero_cochain(const Cochain& a);
bool equals(const Cochain& a, const Cochain& b);

std::vector<HPolyhedron> support_bound(const Cochain& a);

Cochain cochain_normal_form(const Cochain& a);

/// Piecewise-affine cut function f = min(pos) - min(neg) on the target.
struct AffineFunctional {
    Vec normal;
    Q constant;
};
struct CutFunction {
    std::vector<AffineFunctional> pos;
    std::vector<AffineFunctional> neg;

    static CutFunction affine(Vec normal, Q constant);
    /// Box-distance difference, positive strictly inside t_box and negative
    /// strictly inside u_box's complement's complement... i.e. f_T - f_U.
    static CutFunction box_difference(const std::vector<std::pair<Q, Q>>& t_box,
                                      const std::vector<std::pair<Q, Q>>& u_box);
};
Q cut_eval(const CutFunction& f, const Vec& y);

enum class MvSide { TMinus, UPlus };

/// Checks {f >= 0} cap (T cup U) inside T and {f <= 0} cap (T cup U) inside U.
void validate_cut(const CutFunction& f, const Target& t, const Target& u,
                  const Target& union_target);

/// The precochain extension operator: from a precochain on T (side TMinus)
/// or on U (side UPlus) to one on the union target.
Cochain mv_split(const Cochain& a, const Target& union_target, MvSide side,
                 const CutFunction& f);

/// The chain restriction operator: from a chain on the union target to one
/// on T (side TMinus) or U (side UPlus).
Chain mv_chain_split(const Chain& a, const Target& part_target, MvSide side,
                     const CutFunction& f);

// interop with the chain core (used by products and duality)
MChainGenerator cochain_core(const MCochainGenerator& g);
MCochainGenerator cochain_from_core(MChainGenerator core, CochainVariant variant);

/// Subdivides a piece so that f o t is affine on every subpiece; the cut
/// seams are strict sides. Returns subpieces with the active functional.
struct CutPiece {
    Polyhedron piece;
    AffineFunctional active;  // f o t on this subpiece, in ambient coordinates
};
std::vector<CutPiece> subdivide_by_cut(const Polyhedron& piece, const AffineMap& tmap,
                                       const CutFunction& f);

}  // namespace mchain

#endif
