#ifndef MCHAIN_RATIONAL_HPP
#define MCHAIN_RATIONAL_HPP

#include <gmpxx.h>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mchain {

/// Exact rational scalar. mpq_class keeps the canonical reduced form
/// (gcd 1, positive denominator) after every arithmetic operation.
using Q = mpq_class;

using Vec = std::vector<Q>;

inline Q q_of(long num, long den = 1) {
    Q r(num, den);
    r.canonicalize();
    return r;
}

inline int sgn(const Q& x) { return mpq_sgn(x.get_mpq_t()); }

/// Parses "p", "-p" or "p/q" with q > 0 after canonicalization.
/// Rejects zero denominators and anything with stray characters.
Q parse_rational(const std::string& text);

std::string to_string(const Q& x);

struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<Q> a;  // row major

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    Q& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const Q& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static Mat identity(int n);
    static Mat from_rows(const std::vector<Vec>& rows);
    static Mat from_cols(const std::vector<Vec>& cols);

    Vec row(int i) const;
    Vec col(int j) const;
    Mat transposed() const;

    bool operator==(const Mat& o) const = default;
};

Mat operator*(const Mat& A, const Mat& B);
Vec mat_vec(const Mat& A, const Vec& x);
Vec operator+(const Vec& x, const Vec& y);
Vec operator-(const Vec& x, const Vec& y);
Vec scale(const Q& c, const Vec& x);
Q dot(const Vec& x, const Vec& y);
bool is_zero_vec(const Vec& x);

/// Result of exact Gauss-Jordan elimination with lexicographic pivoting:
/// first candidate column, then first nonzero row. Deterministic.
struct Rref {
    Mat m;
    std::vector<int> pivot_cols;
    int rank = 0;
};

Rref rref(Mat A);

/// Determinant of a square matrix (fraction-free not needed; Q is exact).
Q det(Mat A);

int rank(const Mat& A);

/// One solution of A x = b, if consistent.
std::optional<Vec> solve(const Mat& A, const Vec& b);

/// Basis of the kernel of A, one vector per free column, in column order.
std::vector<Vec> kernel_basis(const Mat& A);

/// Total order on vectors/matrices used wherever determinism requires one.
int compare(const Vec& x, const Vec& y);
int compare(const Mat& A, const Mat& B);

}  // namespace mchain

#endif
