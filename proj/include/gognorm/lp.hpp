#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

// Exact rational linear programming.  min c.x subject to A x = b, x >= 0,
// solved by the two-phase primal simplex with Bland's anti-cycling rule.
// Every outcome carries a certificate the caller can re-verify from scratch:
// optimal primal/dual pair with equal objectives, a Farkas witness for
// infeasibility, or a feasible point plus an improving ray for unboundedness.

namespace gognorm {

using QVec = std::vector<Rational>;
using QMat = std::vector<QVec>;

struct LPProblem {
    QMat A;  // rows() x cols()
    QVec b;
    QVec c;
    size_t rows() const { return A.size(); }
    size_t cols() const { return A.empty() ? c.size() : A[0].size(); }
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPResult {
    LPStatus status = LPStatus::Optimal;
    Rational value = 0;      // Optimal: common primal/dual objective
    QVec x;                  // Optimal: solution; Unbounded: a feasible point
    QVec y;                  // Optimal: dual solution; Infeasible: Farkas witness
    QVec ray;                // Unbounded: improving direction
    std::vector<int> basis;  // Optimal: basic columns
};

inline Rational dot(const QVec& a, const QVec& b) {
    Rational s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

namespace detail {

// Full-tableau simplex on [A | extras] with the current basis; cost vector
// spans all columns.  Bland's rule: the entering column is the least index
// with negative reduced cost, the leaving row breaks ratio ties by least
// basic column.  `allowed` masks columns that may enter.
struct Tableau {
    QMat t;                  // rows x (ncols + 1), last entry is the rhs
    std::vector<int> basis;  // basis[r] = column basic in row r
    size_t ncols;

    Rational& rhs(size_t r) { return t[r][ncols]; }

    void pivot(size_t r, size_t j) {
        Rational piv = t[r][j];
        for (auto& v : t[r]) v /= piv;
        for (size_t i = 0; i < t.size(); ++i) {
            if (i == r || t[i][j] == 0) continue;
            Rational f = t[i][j];
            for (size_t k = 0; k <= ncols; ++k) t[i][k] -= f * t[r][k];
        }
        basis[r] = static_cast<int>(j);
    }

    // reduced costs and objective for the restriction of `cost` to the basis
    QVec reduced(const QVec& cost, Rational& objective) const {
        QVec rc(cost);
        objective = 0;
        for (size_t r = 0; r < t.size(); ++r) {
            const Rational& cb = cost[basis[r]];
            if (cb == 0) continue;
            objective += cb * t[r][ncols];
            for (size_t j = 0; j < ncols; ++j)
                if (t[r][j] != 0) rc[j] -= cb * t[r][j];
        }
        return rc;
    }

    // Bland step; returns false at optimality, throws never, sets unbounded
    bool step(const QVec& cost, const std::vector<bool>& allowed, bool& unbounded,
              size_t& entering) {
        Rational obj;
        QVec rc = reduced(cost, obj);
        size_t enter = ncols;
        for (size_t j = 0; j < ncols; ++j)
            if (allowed[j] && rc[j] < 0) {
                enter = j;
                break;
            }
        if (enter == ncols) return false;
        size_t leave = t.size();
        for (size_t r = 0; r < t.size(); ++r) {
            if (t[r][enter] <= 0) continue;
            if (leave == t.size()) {
                leave = r;
                continue;
            }
            Rational cur = t[leave][ncols] / t[leave][enter];
            Rational cand = t[r][ncols] / t[r][enter];
            if (cand < cur || (cand == cur && basis[r] < basis[leave])) leave = r;
        }
        if (leave == t.size()) {
            unbounded = true;
            entering = enter;
            return false;
        }
        pivot(leave, enter);
        return true;
    }
};

}  // namespace detail

inline LPResult lp_solve(const LPProblem& p) {
    size_t m = p.rows(), n = p.cols();
    if (p.b.size() != m || p.c.size() != n)
        throw MalformedProblemError("objective/rhs dimensions disagree with the matrix");
    for (const QVec& row : p.A)
        if (row.size() != n) throw MalformedProblemError("ragged constraint matrix");

    // tableau over original + artificial columns, rhs made nonnegative
    detail::Tableau T;
    T.ncols = n + m;
    T.t.assign(m, QVec(n + m + 1, Rational(0)));
    std::vector<Rational> rowsign(m, Rational(1));
    for (size_t i = 0; i < m; ++i) {
        Rational s = p.b[i] < 0 ? Rational(-1) : Rational(1);
        rowsign[i] = s;
        for (size_t j = 0; j < n; ++j) T.t[i][j] = s * p.A[i][j];
        T.t[i][n + i] = 1;
        T.t[i][n + m] = s * p.b[i];
        T.basis.push_back(static_cast<int>(n + i));
    }

    QVec phase1(n + m, Rational(0));
    for (size_t i = 0; i < m; ++i) phase1[n + i] = 1;
    std::vector<bool> all(n + m, true);
    bool unbounded = false;
    size_t entering = 0;
    while (T.step(phase1, all, unbounded, entering)) {
    }

    Rational infeas;
    QVec rc1 = T.reduced(phase1, infeas);
    if (infeas > 0) {
        // Farkas: y.A <= 0 with y.b > 0, read off the phase-1 duals
        LPResult res;
        res.status = LPStatus::Infeasible;
        res.y.assign(m, Rational(0));
        for (size_t i = 0; i < m; ++i) res.y[i] = rowsign[i] * (Rational(1) - rc1[n + i]);
        res.value = infeas;
        return res;
    }

    // drive leftover artificials out of the basis; a row with no original
    // pivot entry is a redundant constraint and is cleared
    std::vector<bool> original(n + m, false);
    for (size_t j = 0; j < n; ++j) original[j] = true;
    for (size_t r = 0; r < m; ++r) {
        if (T.basis[r] < static_cast<int>(n)) continue;
        size_t piv = n;
        for (size_t j = 0; j < n; ++j)
            if (T.t[r][j] != 0) {
                piv = j;
                break;
            }
        if (piv < n) T.pivot(r, piv);
    }

    QVec phase2(n + m, Rational(0));
    for (size_t j = 0; j < n; ++j) phase2[j] = p.c[j];
    // artificial columns stay out of play from here on
    for (size_t j = n; j < n + m; ++j) all[j] = false;
    unbounded = false;
    while (T.step(phase2, all, unbounded, entering)) {
    }

    LPResult res;
    res.x.assign(n, Rational(0));
    for (size_t r = 0; r < m; ++r)
        if (T.basis[r] < static_cast<int>(n)) res.x[T.basis[r]] = T.t[r][T.ncols];

    if (unbounded) {
        res.status = LPStatus::Unbounded;
        res.ray.assign(n, Rational(0));
        res.ray[entering] = 1;
        for (size_t r = 0; r < m; ++r)
            if (T.basis[r] < static_cast<int>(n)) res.ray[T.basis[r]] = -T.t[r][entering];
        return res;
    }

    res.status = LPStatus::Optimal;
    // dual from the final reduced costs of the artificial unit columns
    Rational obj;
    QVec rc2 = T.reduced(phase2, obj);
    res.value = obj;
    res.y.assign(m, Rational(0));
    for (size_t i = 0; i < m; ++i) res.y[i] = rowsign[i] * (-rc2[n + i]);
    for (size_t r = 0; r < m; ++r)
        if (T.basis[r] < static_cast<int>(n)) res.basis.push_back(T.basis[r]);
    std::sort(res.basis.begin(), res.basis.end());
    return res;
}

// Re-derive every claim of the certificate from the problem data; returns an
// empty string when everything checks out, else the first discrepancy.
inline std::string lp_verify(const LPProblem& p, const LPResult& r) {
    size_t m = p.rows(), n = p.cols();
    auto feasible = [&](const QVec& x) -> std::string {
        if (x.size() != n) return "primal size mismatch";
        for (const Rational& v : x)
            if (v < 0) return "primal negativity";
        for (size_t i = 0; i < m; ++i)
            if (dot(p.A[i], x) != p.b[i]) return "primal constraint violated";
        return "";
    };
    switch (r.status) {
        case LPStatus::Optimal: {
            std::string err = feasible(r.x);
            if (!err.empty()) return err;
            if (r.y.size() != m) return "dual size mismatch";
            for (size_t j = 0; j < n; ++j) {
                Rational rcj = p.c[j];
                for (size_t i = 0; i < m; ++i) rcj -= p.A[i][j] * r.y[i];
                if (rcj < 0) return "dual infeasibility (negative reduced cost)";
            }
            if (dot(p.c, r.x) != r.value) return "primal objective mismatch";
            if (dot(p.b, r.y) != r.value) return "dual objective mismatch";
            return "";
        }
        case LPStatus::Infeasible: {
            if (r.y.size() != m) return "witness size mismatch";
            for (size_t j = 0; j < n; ++j) {
                Rational s = 0;
                for (size_t i = 0; i < m; ++i) s += p.A[i][j] * r.y[i];
                if (s > 0) return "witness fails y.A <= 0";
            }
            if (dot(p.b, r.y) <= 0) return "witness fails y.b > 0";
            return "";
        }
        case LPStatus::Unbounded: {
            std::string err = feasible(r.x);
            if (!err.empty()) return err;
            if (r.ray.size() != n) return "ray size mismatch";
            for (const Rational& v : r.ray)
                if (v < 0) return "ray negativity";
            for (size_t i = 0; i < m; ++i)
                if (dot(p.A[i], r.ray) != 0) return "ray leaves the affine space";
            if (dot(p.c, r.ray) >= 0) return "ray does not improve";
            return "";
        }
    }
    return "unknown status";
}

// ---------------------------------------------------------------------------
// incremental construction with named columns

struct LPBuilder {
    std::vector<std::string> names;
    QVec cost;
    std::vector<std::vector<std::pair<int, Rational>>> rows;  // sparse equality rows
    QVec rhs;

    int add_var(const std::string& name, const Rational& obj_coeff) {
        names.push_back(name);
        cost.push_back(obj_coeff);
        return static_cast<int>(names.size()) - 1;
    }

    void add_row(std::vector<std::pair<int, Rational>> terms, const Rational& b) {
        rows.push_back(std::move(terms));
        rhs.push_back(b);
    }

    LPProblem build() const {
        LPProblem p;
        p.c = cost;
        p.b = rhs;
        p.A.assign(rows.size(), QVec(cost.size(), Rational(0)));
        for (size_t i = 0; i < rows.size(); ++i)
            for (const auto& [j, v] : rows[i]) {
                if (j < 0 || j >= static_cast<int>(cost.size()))
                    throw MalformedProblemError("row references a missing column");
                p.A[i][j] += v;
            }
        return p;
    }
};

}  // namespace gognorm
