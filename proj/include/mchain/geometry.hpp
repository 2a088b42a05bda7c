#ifndef MCHAIN_GEOMETRY_HPP
#define MCHAIN_GEOMETRY_HPP

#include "mchain/lp.hpp"
#include "mchain/rational.hpp"

#include <variant>

namespace mchain {

/// Oriented affine subspace of R^ambient. The ordered basis fixes the
/// orientation; dim 0 flats (points) have an empty basis.
struct Flat {
    int ambient = 0;
    Vec base;
    std::vector<Vec> basis;

    int dim() const { return static_cast<int>(basis.size()); }
    bool operator==(const Flat& o) const = default;
};

Flat full_flat(int ambient);  // R^ambient with the standard basis

/// normal . u <= offset in flat coordinates. The strict flag is carried for
/// modelling open targets; measure/overlay ignore it.
struct Halfspace {
    Vec normal;
    Q offset;
    bool strict = false;

    bool operator==(const Halfspace& o) const = default;
};

/// Full-dimensional convex polyhedron inside its flat, with a sign giving
/// its orientation relative to the flat's basis orientation.
struct Polyhedron {
    Flat flat;
    std::vector<Halfspace> ineqs;
    int orient = 1;
};

struct AffineMap {
    Mat linear;
    Vec translation;

    int domain_dim() const { return linear.cols; }
    int codomain_dim() const { return linear.rows; }

    Vec apply(const Vec& x) const { return mat_vec(linear, x) + translation; }
    static AffineMap identity(int n) { return {Mat::identity(n), Vec(n)}; }
    static AffineMap constant(int dom, Vec value);

    bool operator==(const AffineMap& o) const = default;
};

AffineMap compose(const AffineMap& f, const AffineMap& g);  // f after g

/// Coordinates -> ambient embedding of a flat, x = base + basis . u.
AffineMap embedding(const Flat& f);

Vec from_flat_coords(const Flat& f, const Vec& coords);
/// Inverse of the embedding; throws if the point is off the flat.
Vec to_flat_coords(const Flat& f, const Vec& ambient_point);

struct CanonicalFlat {
    Flat flat;  // rref basis, base point with zero pivot coordinates
    int sign;   // orientation of the original basis against the canonical one
};
CanonicalFlat canonicalize(const Flat& f);

bool same_affine_span(const Flat& a, const Flat& b);

/// Affine change of coordinates between two flats with the same span:
/// coords_to = T . coords_from + d.
AffineMap flat_transition(const Flat& from, const Flat& to);

/// Affine hull of the image of a flat under an ambient-coordinate map;
/// the hull's dim equals the rank of the composed linear part.
Flat affine_image_hull(const Flat& f, const AffineMap& map);

/// Same point set, described in the coordinates of `onto` (same span).
Polyhedron reexpress_onto(const Polyhedron& p, const Flat& onto);

int compare(const Flat& a, const Flat& b);

struct Measure {
    bool empty = true;
    int dim = -1;
};

Measure measure(const Polyhedron& p);

struct ZeroDimensional : std::runtime_error {
    ZeroDimensional() : std::runtime_error("facets of a zero-dimensional polyhedron") {}
};

struct Facet {
    Polyhedron poly;      // lives in its own (k-1)-flat, same ambient
    Vec outward_normal;   // in the parent's flat coordinates
};

/// Irredundant facets with outward-normal-first induced orientations.
std::vector<Facet> facets(const Polyhedron& p);

/// normal . u = offset, canonically scaled (first nonzero coefficient 1).
struct Hyperplane {
    Vec normal;
    Q offset;

    bool operator==(const Hyperplane& o) const = default;
};

Hyperplane make_hyperplane(Vec normal, Q offset);

struct ArrangementCell {
    std::vector<int> signs;  // one per hyperplane, -1 or +1
    Vec sample;              // strictly interior rational point, flat coords
};

/// Full-dimensional cells of the arrangement cut out by the hyperplanes
/// inside the region (whole space when region is empty). Hyperplanes are
/// deduplicated and sorted first; cell signs refer to that sorted list.
struct Arrangement {
    std::vector<Hyperplane> hyperplanes;
    std::vector<ArrangementCell> cells;
};

Arrangement arrange(int dim, std::vector<Hyperplane> hyperplanes,
                    const std::vector<Halfspace>& region = {});

/// Spec-level overlay: cells generated by all facet hyperplanes of all the
/// polyhedra (identified exactly onto `flat`) plus extra hyperplanes.
Arrangement overlay(const Flat& flat, const std::vector<Polyhedron>& polys,
                    const std::vector<Hyperplane>& extra);

struct NearOrigin {};
struct NearZeroCrossTarget {
    int m = 0;  // trailing target coordinates excluded from the distance
};
using ToleranceRegion = std::variant<NearOrigin, NearZeroCrossTarget>;

/// Certificate that a map restricted to a polyhedron is proper over a
/// neighbourhood of the tolerance region. No radius means every radius.
struct Properness {
    bool proper = false;
    std::optional<Q> radius;
};

/// Decides properness of `map` (flat coordinates -> R^cod) restricted to p:
/// (a) recession cone meets ker(linear part) only at 0, or (b) the image
/// keeps a positive distance from the tolerance region, else NotProper.
Properness recession_proper(const Polyhedron& p, const AffineMap& map,
                            const ToleranceRegion& region);

struct Degenerate {};
struct FullImage {
    Flat flat;         // canonical oriented affine hull of the image
    Polyhedron image;  // in that flat's coordinates
    int sign;          // pushforward of p's orientation vs the hull basis
};
using ImageFlat = std::variant<Degenerate, FullImage>;

/// Image of p under an ambient-coordinate affine map, when injective on
/// the flat; Degenerate when the restricted rank drops.
ImageFlat image_flat(const Polyhedron& p, const AffineMap& map);

// H-representation helpers (flat coordinates).

std::optional<Vec> interior_point(const std::vector<Halfspace>& ineqs, int dim);
bool hrep_feasible(const std::vector<Halfspace>& ineqs, int dim);
int affine_hull_dim(const std::vector<Halfspace>& ineqs, int dim);  // -1 if empty
bool is_bounded(const std::vector<Halfspace>& ineqs, int dim);
std::vector<Halfspace> prune_redundant(std::vector<Halfspace> ineqs, int dim);
LpResult optimize_over(const std::vector<Halfspace>& ineqs, int dim, const Vec& objective,
                       bool maximize = true);

/// Possibly lower-dimensional H-polyhedron in ambient coordinates.
struct HPolyhedron {
    int ambient = 0;
    std::vector<Halfspace> ineqs;
    std::vector<std::pair<Vec, Q>> eqs;
};

/// Exact image { map(u) : u in P, extra_eqs(u) = 0 } by Gaussian elimination
/// of the equalities and Fourier-Motzkin elimination of the rest.
HPolyhedron affine_image_hrep(const Polyhedron& p, const AffineMap& map,
                              const std::vector<std::pair<Vec, Q>>& extra_eqs = {});

bool hpoly_contains(const HPolyhedron& h, const Vec& point);

}  // namespace mchain

#endif
