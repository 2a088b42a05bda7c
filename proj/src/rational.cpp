#include "mchain/rational.hpp"

namespace mchain {

Q parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational literal");
    std::string num = text, den = "1";
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        num = text.substr(0, slash);
        den = text.substr(slash + 1);
    }
    auto digits_ok = [](const std::string& s, bool sign_ok) {
        if (s.empty()) return false;
        size_t i = 0;
        if (sign_ok && (s[0] == '-' || s[0] == '+')) i = 1;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (s[i] < '0' || s[i] > '9') return false;
        return true;
    };
    if (!digits_ok(num, true) || !digits_ok(den, false))
        throw std::invalid_argument("bad rational literal: " + text);
    mpz_class n(num), d(den);
    if (d == 0) throw std::invalid_argument("zero denominator: " + text);
    Q r(n, d);
    r.canonicalize();
    return r;
}

std::string to_string(const Q& x) {
    std::string s = x.get_num().get_str();
    if (x.get_den() != 1) s += "/" + x.get_den().get_str();
    return s;
}

Mat Mat::identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

Mat Mat::from_rows(const std::vector<Vec>& rows) {
    Mat m(static_cast<int>(rows.size()), rows.empty() ? 0 : static_cast<int>(rows[0].size()));
    for (int i = 0; i < m.rows; ++i) {
        if (static_cast<int>(rows[i].size()) != m.cols)
            throw std::invalid_argument("ragged rows");
        for (int j = 0; j < m.cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

Mat Mat::from_cols(const std::vector<Vec>& cols) {
    Mat m(cols.empty() ? 0 : static_cast<int>(cols[0].size()), static_cast<int>(cols.size()));
    for (int j = 0; j < m.cols; ++j) {
        if (static_cast<int>(cols[j].size()) != m.rows)
            throw std::invalid_argument("ragged cols");
        for (int i = 0; i < m.rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
}

Vec Mat::row(int i) const {
    Vec r(cols);
    for (int j = 0; j < cols; ++j) r[j] = (*this)(i, j);
    return r;
}

Vec Mat::col(int j) const {
    Vec c(rows);
    for (int i = 0; i < rows; ++i) c[i] = (*this)(i, j);
    return c;
}

Mat Mat::transposed() const {
    Mat t(cols, rows);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Mat operator*(const Mat& A, const Mat& B) {
    if (A.cols != B.rows) throw std::invalid_argument("mat mul shape");
    Mat c(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int k = 0; k < A.cols; ++k) {
            if (A(i, k) == 0) continue;
            for (int j = 0; j < B.cols; ++j) c(i, j) += A(i, k) * B(k, j);
        }
    return c;
}

Vec mat_vec(const Mat& A, const Vec& x) {
    if (A.cols != static_cast<int>(x.size())) throw std::invalid_argument("mat_vec shape");
    Vec y(A.rows);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j)
            if (A(i, j) != 0) y[i] += A(i, j) * x[j];
    return y;
}

Vec operator+(const Vec& x, const Vec& y) {
    if (x.size() != y.size()) throw std::invalid_argument("vec add shape");
    Vec z(x.size());
    for (size_t i = 0; i < x.size(); ++i) z[i] = x[i] + y[i];
    return z;
}

Vec operator-(const Vec& x, const Vec& y) {
    if (x.size() != y.size()) throw std::invalid_argument("vec sub shape");
    Vec z(x.size());
    for (size_t i = 0; i < x.size(); ++i) z[i] = x[i] - y[i];
    return z;
}

Vec scale(const Q& c, const Vec& x) {
    Vec z(x.size());
    for (size_t i = 0; i < x.size(); ++i) z[i] = c * x[i];
    return z;
}

Q dot(const Vec& x, const Vec& y) {
    if (x.size() != y.size()) throw std::invalid_argument("dot shape");
    Q s = 0;
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

bool is_zero_vec(const Vec& x) {
    for (const Q& v : x)
        if (v != 0) return false;
    return true;
}

Rref rref(Mat A) {
    Rref r;
    int row = 0;
    for (int col = 0; col < A.cols && row < A.rows; ++col) {
        int piv = -1;
        for (int i = row; i < A.rows; ++i)
            if (A(i, col) != 0) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != row)
            for (int j = 0; j < A.cols; ++j) std::swap(A(row, j), A(piv, j));
        Q inv = 1 / A(row, col);
        for (int j = 0; j < A.cols; ++j) A(row, j) *= inv;
        for (int i = 0; i < A.rows; ++i) {
            if (i == row || A(i, col) == 0) continue;
            Q f = A(i, col);
            for (int j = 0; j < A.cols; ++j) A(i, j) -= f * A(row, j);
        }
        r.pivot_cols.push_back(col);
        ++row;
    }
    r.rank = row;
    r.m = std::move(A);
    return r;
}

Q det(Mat A) {
    if (A.rows != A.cols) throw std::invalid_argument("det of non-square");
    Q d = 1;
    int n = A.rows;
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int i = col; i < n; ++i)
            if (A(i, col) != 0) { piv = i; break; }
        if (piv < 0) return 0;
        if (piv != col) {
            for (int j = 0; j < n; ++j) std::swap(A(col, j), A(piv, j));
            d = -d;
        }
        d *= A(col, col);
        Q inv = 1 / A(col, col);
        for (int i = col + 1; i < n; ++i) {
            if (A(i, col) == 0) continue;
            Q f = A(i, col) * inv;
            for (int j = col; j < n; ++j) A(i, j) -= f * A(col, j);
        }
    }
    return d;
}

int rank(const Mat& A) { return rref(A).rank; }

std::optional<Vec> solve(const Mat& A, const Vec& b) {
    Mat aug(A.rows, A.cols + 1);
    for (int i = 0; i < A.rows; ++i) {
        for (int j = 0; j < A.cols; ++j) aug(i, j) = A(i, j);
        aug(i, A.cols) = b[i];
    }
    Rref r = rref(std::move(aug));
    for (int p : r.pivot_cols)
        if (p == A.cols) return std::nullopt;  // row (0...0 | 1): inconsistent
    Vec x(A.cols);
    for (int i = 0; i < static_cast<int>(r.pivot_cols.size()); ++i)
        x[r.pivot_cols[i]] = r.m(i, A.cols);
    return x;
}

std::vector<Vec> kernel_basis(const Mat& A) {
    Rref r = rref(A);
    std::vector<bool> is_pivot(A.cols, false);
    for (int p : r.pivot_cols) is_pivot[p] = true;
    std::vector<Vec> basis;
    for (int j = 0; j < A.cols; ++j) {
        if (is_pivot[j]) continue;
        Vec v(A.cols);
        v[j] = 1;
        for (int i = 0; i < static_cast<int>(r.pivot_cols.size()); ++i)
            v[r.pivot_cols[i]] = -r.m(i, j);
        basis.push_back(std::move(v));
    }
    return basis;
}

int compare(const Vec& x, const Vec& y) {
    if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
    for (size_t i = 0; i < x.size(); ++i) {
        int c = cmp(x[i], y[i]);
        if (c != 0) return c < 0 ? -1 : 1;
    }
    return 0;
}

int compare(const Mat& A, const Mat& B) {
    if (A.rows != B.rows) return A.rows < B.rows ? -1 : 1;
    if (A.cols != B.cols) return A.cols < B.cols ? -1 : 1;
    for (size_t i = 0; i < A.a.size(); ++i) {
        int c = cmp(A.a[i], B.a[i]);
        if (c != 0) return c < 0 ? -1 : 1;
    }
    return 0;
}

}  // namespace mchain
