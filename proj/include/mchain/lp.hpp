#ifndef MCHAIN_LP_HPP
#define MCHAIN_LP_HPP

#include "mchain/rational.hpp"

namespace mchain {

/// Feasible region { x : A x <= b, E x = e }, x free.
struct LpProblem {
    Mat A;
    Vec b;
    Mat E;
    Vec e;

    int vars() const { return A.cols != 0 ? A.cols : E.cols; }
    void add_le(const Vec& normal, const Q& rhs);
    void add_eq(const Vec& normal, const Q& rhs);
};

enum class LpStatus { Infeasible, Unbounded, Optimal };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    Q value;
    Vec point;
};

/// Exact two-phase simplex, Bland's rule (lowest index) for both the
/// entering and the leaving variable, so degenerate ties are broken
/// lexicographically and the run is deterministic.
LpResult lp_maximize(const LpProblem& p, const Vec& objective);

LpResult lp_minimize(const LpProblem& p, const Vec& objective);

std::optional<Vec> feasible_point(const LpProblem& p);

}  // namespace mchain

#endif
