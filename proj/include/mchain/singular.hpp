#ifndef MCHAIN_SINGULAR_HPP
#define MCHAIN_SINGULAR_HPP

#include "mchain/chains.hpp"

namespace mchain {

struct ZeroDegree : std::runtime_error {
    ZeroDegree() : std::runtime_error("boundary of a zero-degree singular chain") {}
};

/// Formal sums of affine singular simplices sigma : Delta_k -> Y, each
/// stored as an affine map out of the simplex ambient R^{k+1}.
struct SingularChain {
    CoefficientRing ring;
    int k = 0;
    Target target;
    std::vector<std::pair<Q, AffineMap>> terms;
};

/// Validates shapes and images and combines identical simplices.
SingularChain make_singular(CoefficientRing ring, int k, Target target,
                            std::vector<std::pair<Q, AffineMap>> terms);

SingularChain add(const SingularChain& a, const SingularChain& b);
SingularChain negate(SingularChain a);
bool identical(const SingularChain& a, const SingularChain& b);

SingularChain singular_boundary(const SingularChain& c);
SingularChain barycentric(const SingularChain& c);
SingularChain singular_pushforward(const AffineMap& f, const Target& to,
                                   const SingularChain& c);

/// sigma -> [Delta_k, 0, 0, sigma].
Chain to_mchain(const SingularChain& c);

/// Piecewise-affine homotopy Y1 x [0,1] -> Y2: affine on each [c_i, c_{i+1}]
/// slab, continuous across the breakpoints. Maps take (y, tau) with tau the
/// last input coordinate.
struct Homotopy {
    std::vector<Q> breakpoints;    // 0 = c_0 < c_1 < ... < c_r = 1
    std::vector<AffineMap> maps;   // one per slab
};

Homotopy make_homotopy(std::vector<Q> breakpoints, std::vector<AffineMap> maps);
AffineMap homotopy_end(const Homotopy& g, bool at_one);

/// The chain homotopy G with boundary(G a) + G(boundary a) = f'_* a - f_* a.
Chain homotopy_G(const Homotopy& g, const Target& y2, const Chain& a);

}  // namespace mchain

#endif
