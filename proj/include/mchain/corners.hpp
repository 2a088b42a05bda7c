#ifndef MCHAIN_CORNERS_HPP
#define MCHAIN_CORNERS_HPP

#include "mchain/geometry.hpp"

namespace mchain {

/// Map target: the point, a Euclidean factor R^m, or an open polyhedral
/// domain of R^m given as a finite union of convex components cut out by
/// strict inequalities.
struct Target {
    enum class Kind { Point, Euclidean, Domain };
    Kind kind = Kind::Point;
    int ambient = 0;
    std::vector<std::vector<Halfspace>> components;

    static Target point() { return {}; }
    static Target euclidean(int m) { return {Kind::Euclidean, m, {}}; }
    static Target domain(int m, std::vector<std::vector<Halfspace>> comps);
    /// All of R^m as a one-component domain.
    static Target whole_space(int m) { return domain(m, {{}}); }

    bool operator==(const Target& o) const = default;
};

/// Disjoint union of oriented full-dimensional polyhedra of one dimension.
/// Pieces may live in different ambient spaces.
struct CornersSpace {
    std::vector<Polyhedron> pieces;
    int dim = 0;
};

/// Builds a corners space, dropping empty pieces and checking the shared
/// dimension invariant.
CornersSpace make_corners(std::vector<Polyhedron> pieces, int dim);

/// Per-piece affine maps out of the ambient coordinates of each piece.
struct SpaceMap {
    std::vector<AffineMap> maps;
    Target target;
};

struct TargetMismatch : std::runtime_error {
    explicit TargetMismatch(const std::string& what) : std::runtime_error(what) {}
};
struct NotTransverse : std::runtime_error {
    NotTransverse() : std::runtime_error("neither map is a piecewise submersion") {}
};

bool target_contains_point(const Target& t, const Vec& y, bool strictly);

/// Feasibility that honours strict rows: such rows must hold with slack.
bool feasible_strict(const std::vector<Halfspace>& ineqs, int dim);

/// Exact check that the image of every piece satisfies the target's
/// constraints (strictly, for Domain targets).
void validate_map(const CornersSpace& v, const SpaceMap& m);

struct Boundary {
    CornersSpace space;
    std::vector<int> parent;  // originating piece per facet
};

/// Disjoint union of all facets with outward-normal-first orientations.
Boundary boundary(const CornersSpace& v);

struct PiecePair {
    int left;
    int right;
};

struct Product {
    CornersSpace space;
    std::vector<PiecePair> from;
};

Product product(const CornersSpace& v, const CornersSpace& w);

/// Transverse fibre product over an m-dimensional Euclidean target:
/// pieces are the solution sets { t(v) = u(w) } re-coordinatized onto a
/// deterministically chosen basis, oriented by the fibre-first convention
/// calibrated against the boundary/commutativity sign laws.
Product fibre_product(const CornersSpace& v, const SpaceMap& t, const CornersSpace& w,
                      const SpaceMap& u, int target_dim);

/// One piece-pair fibre product in raw form; used by the chain layer to
/// assemble the composed reference maps. Empty optional when the pair's
/// solution set is empty or degenerate.
struct FibrePiece {
    Polyhedron piece;   // ambient = amb(left) + amb(right)
    Vec left_point;     // particular solution, left flat coordinates
    Vec right_point;
    std::vector<Vec> left_dirs;  // kernel basis split into factor coordinates
    std::vector<Vec> right_dirs;
};
std::optional<FibrePiece> fibre_piece(const Polyhedron& p, const AffineMap& tp,
                                      const Polyhedron& q, const AffineMap& uq, int m,
                                      bool submersion_on_left);

struct SimplexScheme {
    int k = 0;
    Polyhedron simplex;                    // standard Delta_k in R^{k+1}
    std::vector<AffineMap> face_maps;      // F_j : R^k -> R^{k+1}, j = 0..k
    std::vector<AffineMap> subdivision;    // (k+1)! affine self-maps of Delta_k
    std::vector<int> subdivision_signs;    // orientation signs of those maps
};

SimplexScheme simplex(int k);

}  // namespace mchain

#endif
