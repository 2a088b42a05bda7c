#include "mchain/lp.hpp"

namespace mchain {

void LpProblem::add_le(const Vec& normal, const Q& rhs) {
    if (A.cols == 0 && A.rows == 0) A.cols = static_cast<int>(normal.size());
    if (static_cast<int>(normal.size()) != A.cols) throw std::invalid_argument("lp row shape");
    ++A.rows;
    A.a.insert(A.a.end(), normal.begin(), normal.end());
    b.push_back(rhs);
}

void LpProblem::add_eq(const Vec& normal, const Q& rhs) {
    if (E.cols == 0 && E.rows == 0) E.cols = static_cast<int>(normal.size());
    if (static_cast<int>(normal.size()) != E.cols) throw std::invalid_argument("lp row shape");
    ++E.rows;
    E.a.insert(E.a.end(), normal.begin(), normal.end());
    e.push_back(rhs);
}

namespace {

// Dense tableau over Q. Columns: structural variables (already >= 0),
// then slacks, then artificials; the last column is the rhs.
class Tableau {
public:
    Tableau(int rows, int vars) : m_(rows), n_(vars), t_(rows, vars + 1), basis_(rows, -1) {}

    Q& at(int i, int j) { return t_(i, j); }
    Q& rhs(int i) { return t_(i, n_); }
    int rows() const { return m_; }

    void set_basis(int row, int var) { basis_[row] = var; }
    int basis(int row) const { return basis_[row]; }

    // Maximizes obj (length n_). Returns false if unbounded.
    // On return, obj_value() and solution() describe the optimum.
    bool run(const Vec& obj) {
        // reduced objective row: z = value_ + sum red_[j] x_j over nonbasic j
        red_.assign(n_, Q(0));
        value_ = 0;
        for (int j = 0; j < n_; ++j) red_[j] = obj[j];
        for (int i = 0; i < m_; ++i) {
            int bv = basis_[i];
            if (obj[bv] == 0) continue;
            Q c = obj[bv];
            value_ += c * rhs(i);
            for (int j = 0; j < n_; ++j) red_[j] -= c * t_(i, j);
        }
        for (int i = 0; i < m_; ++i) red_[basis_[i]] = 0;

        for (;;) {
            int enter = -1;
            for (int j = 0; j < n_; ++j)
                if (red_[j] > 0 && !blocked_[j]) { enter = j; break; }
            if (enter < 0) return true;
            int leave = -1;
            Q best;
            for (int i = 0; i < m_; ++i) {
                if (t_(i, enter) <= 0) continue;
                Q ratio = rhs(i) / t_(i, enter);
                if (leave < 0 || ratio < best ||
                    (ratio == best && basis_[i] < basis_[leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (leave < 0) return false;
            pivot(leave, enter);
        }
    }

    void pivot(int row, int col) {
        Q inv = 1 / t_(row, col);
        for (int j = 0; j <= n_; ++j) t_(row, j) *= inv;
        for (int i = 0; i < m_; ++i) {
            if (i == row || t_(i, col) == 0) continue;
            Q f = t_(i, col);
            for (int j = 0; j <= n_; ++j) t_(i, j) -= f * t_(row, j);
        }
        Q f = red_[col];
        if (f != 0) {
            value_ += f * rhs(row);
            for (int j = 0; j < n_; ++j) red_[j] -= f * t_(row, j);
        }
        basis_[row] = col;
    }

    void init_blocked(int n_total) { blocked_.assign(n_total, false); }
    void block(int j) { blocked_[j] = true; }

    const Q& obj_value() const { return value_; }

    Vec solution(int upto) const {
        Vec x(upto);
        for (int i = 0; i < m_; ++i)
            if (basis_[i] < upto) x[basis_[i]] = t_(i, n_);
        return x;
    }

    // Drives a basic artificial out of the basis if the row has any usable
    // column; returns false when the row is identically zero (redundant).
    bool evict(int row, int first_artificial) {
        for (int j = 0; j < first_artificial; ++j) {
            if (blocked_[j]) continue;
            if (t_(row, j) != 0) {
                pivot(row, j);
                return true;
            }
        }
        return false;
    }

private:
    int m_, n_;
    Mat t_;
    std::vector<int> basis_;
    std::vector<bool> blocked_;
    Vec red_;
    Q value_;
};

}  // namespace

LpResult lp_maximize(const LpProblem& p, const Vec& objective) {
    int k = p.vars();
    if (k == 0) {
        // no variables at all: feasible iff every constant constraint holds
        LpResult r;
        for (size_t i = 0; i < p.b.size(); ++i)
            if (p.b[i] < 0) return r;
        for (size_t i = 0; i < p.e.size(); ++i)
            if (p.e[i] != 0) return r;
        r.status = LpStatus::Optimal;
        r.value = 0;
        return r;
    }
    int m_le = p.A.rows, m_eq = p.E.rows, m = m_le + m_eq;
    // nonnegative variables: x = u - v with u, v >= 0
    int nu = 2 * k, n_slack = m_le, n_total = nu + n_slack + m;
    Tableau t(m, n_total);
    int art_used = 0;
    std::vector<int> art_rows;
    for (int i = 0; i < m; ++i) {
        Vec row(k);
        Q rhs;
        if (i < m_le) {
            row = p.A.row(i);
            rhs = p.b[i];
        } else {
            row = p.E.row(i - m_le);
            rhs = p.e[i - m_le];
        }
        int sign = rhs < 0 ? -1 : 1;
        for (int j = 0; j < k; ++j) {
            t.at(i, j) = sign * row[j];
            t.at(i, k + j) = -sign * row[j];
        }
        if (i < m_le) t.at(i, nu + i) = sign;
        t.rhs(i) = sign * rhs;
        if (i < m_le && sign > 0) {
            t.set_basis(i, nu + i);
        } else {
            int art = nu + n_slack + art_used++;
            t.at(i, art) = 1;
            t.set_basis(i, art);
            art_rows.push_back(i);
        }
    }
    int first_art = nu + n_slack;
    t.init_blocked(n_total);

    LpResult result;
    if (art_used > 0) {
        Vec phase1(n_total);
        for (int j = 0; j < art_used; ++j) phase1[first_art + j] = -1;
        t.run(phase1);  // bounded by 0, can't be unbounded
        if (t.obj_value() != 0) return result;  // infeasible
        for (int i = 0; i < t.rows(); ++i)
            if (t.basis(i) >= first_art) t.evict(i, first_art);
        for (int j = first_art; j < n_total; ++j) t.block(j);
    }

    Vec phase2(n_total);
    for (int j = 0; j < k; ++j) {
        phase2[j] = objective[j];
        phase2[k + j] = -objective[j];
    }
    if (!t.run(phase2)) {
        result.status = LpStatus::Unbounded;
        return result;
    }
    result.status = LpStatus::Optimal;
    result.value = t.obj_value();
    Vec z = t.solution(nu);
    result.point.resize(k);
    for (int j = 0; j < k; ++j) result.point[j] = z[j] - z[k + j];
    return result;
}

LpResult lp_minimize(const LpProblem& p, const Vec& objective) {
    Vec neg(objective.size());
    for (size_t i = 0; i < objective.size(); ++i) neg[i] = -objective[i];
    LpResult r = lp_maximize(p, neg);
    if (r.status == LpStatus::Optimal) r.value = -r.value;
    return r;
}

std::optional<Vec> feasible_point(const LpProblem& p) {
    LpResult r = lp_maximize(p, Vec(p.vars()));
    if (r.status == LpStatus::Optimal) return r.point;
    return std::nullopt;
}

}  // namespace mchain
