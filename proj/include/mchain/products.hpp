#ifndef MCHAIN_PRODUCTS_HPP
#define MCHAIN_PRODUCTS_HPP

#include "mchain/cochains.hpp"

namespace mchain {

/// The sign ledger: every product-level sign rule lives here, stated as a
/// parity so tests can assert emitted signs against the rule in one place.
namespace sign_rules {

inline int cup(int l, int n) { return (l * n) % 2 ? -1 : 1; }
inline int cap(int l, int m, int n) { return ((l + m) * n) % 2 ? -1 : 1; }
/// Equivalent form of the cap rule stated through the factor dimensions.
inline int cap_alt(int n, int n2, int dim_v2, int dim_y) {
    return (n * (n2 + dim_v2 + dim_y)) % 2 ? -1 : 1;
}
inline int cross_chain(int l, int m2, int n) { return ((l + m2) * n) % 2 ? -1 : 1; }
inline int xi(int n) { return (n * (n - 1) / 2) % 2 ? -1 : 1; }

}  // namespace sign_rules

Target product_target(const Target& a, const Target& b);

/// Cup product of precochains or compactly-supported cochains on one target.
Cochain cup(const Cochain& a, const Cochain& b);

/// Cap products: cochain against a chain, or against a locally finite
/// prechain (LocallyFiniteChain variant).
Chain cap(const Cochain& a, const Chain& b);
Cochain cap(const Cochain& a, const Cochain& b_lf);

/// Cross products: explicit piecewise products with concatenated references.
Cochain cross_cochain(const Cochain& a, const Cochain& b);
Chain cross_chain(const Chain& a, const Chain& b);
Cochain cross_lf(const Cochain& a, const Cochain& b);

/// The involution reversing the reference coordinates.
Chain xi(const Chain& a);
Cochain xi(const Cochain& a);

/// Poincare duality retag: compact cochains to chains, precochains to
/// locally finite prechains. The coorientation-as-orientation storage makes
/// this the identity on the underlying data.
Chain pd_compact(const Cochain& a, ChainMode mode);
Cochain pd(const Cochain& a);

/// Wrong-way maps along a proper cooriented submersion f : Y -> Z.
Chain shriek_lower(const AffineMap& f, const Target& y, const Chain& a_on_z);
Cochain shriek_lower_lf(const AffineMap& f, const Target& y, const Cochain& a_on_z);
Cochain shriek_upper(const AffineMap& f, const Target& z, const Cochain& a_on_y);

}  // namespace mchain

#endif
