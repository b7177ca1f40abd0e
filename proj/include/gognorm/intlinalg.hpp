#pragma once

// Small exact integer linear algebra: column Hermite forms, Diophantine
// solving, kernels, and lattice reduction.  Matrices here are tiny (group
// ranks and edge-group ranks), so the algorithms favour clarity.

#include "rational.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace gognorm {

using IVec = std::vector<Integer>;
using IMat = std::vector<IVec>;  // row-major: IMat[r][c]

inline Integer floor_div(const Integer& a, const Integer& b) {
    // b > 0 assumed.
    Integer q = a / b;
    if (a % b != 0 && a < 0) --q;
    return q;
}

inline IMat identity_matrix(std::size_t n) {
    IMat id(n, IVec(n, 0));
    for (std::size_t i = 0; i < n; ++i) id[i][i] = 1;
    return id;
}

inline IVec mat_vec(const IMat& a, const IVec& x) {
    IVec out(a.size(), 0);
    for (std::size_t r = 0; r < a.size(); ++r)
        for (std::size_t c = 0; c < x.size(); ++c) out[r] += a[r][c] * x[c];
    return out;
}

// Column Hermite echelon form.  Returns H = A * U with U unimodular, H in
// column echelon form with positive pivots, and the pivot positions
// (row, column) in descending row order of discovery (top to bottom).
struct HermiteForm {
    IMat h;
    IMat u;                                          // columns transform: h = a * u
    std::vector<std::pair<std::size_t, std::size_t>> pivots;
};

inline HermiteForm column_hermite(const IMat& a) {
    const std::size_t rows = a.size();
    const std::size_t cols = rows == 0 ? 0 : a[0].size();
    HermiteForm f;
    f.h = a;
    f.u = identity_matrix(cols);

    auto col_addmul = [&](std::size_t dst, std::size_t src, const Integer& k) {
        for (std::size_t r = 0; r < rows; ++r) f.h[r][dst] += k * f.h[r][src];
        for (std::size_t r = 0; r < cols; ++r) f.u[r][dst] += k * f.u[r][src];
    };
    auto col_swap = [&](std::size_t i, std::size_t j) {
        if (i == j) return;
        for (std::size_t r = 0; r < rows; ++r) std::swap(f.h[r][i], f.h[r][j]);
        for (std::size_t r = 0; r < cols; ++r) std::swap(f.u[r][i], f.u[r][j]);
    };
    auto col_negate = [&](std::size_t c) {
        for (std::size_t r = 0; r < rows; ++r) f.h[r][c] = -f.h[r][c];
        for (std::size_t r = 0; r < cols; ++r) f.u[r][c] = -f.u[r][c];
    };

    std::size_t next = 0;
    for (std::size_t row = 0; row < rows && next < cols; ++row) {
        // Euclidean elimination across columns next..cols-1 within this row.
        while (true) {
            std::size_t best = cols;
            for (std::size_t c = next; c < cols; ++c) {
                if (f.h[row][c] == 0) continue;
                if (best == cols || abs(f.h[row][c]) < abs(f.h[row][best])) best = c;
            }
            if (best == cols) break;  // row is zero beyond next
            col_swap(next, best);
            bool clean = true;
            for (std::size_t c = next + 1; c < cols; ++c) {
                if (f.h[row][c] == 0) continue;
                const Integer q = floor_div(f.h[row][c], abs(f.h[row][next])) *
                                  (f.h[row][next] < 0 ? -1 : 1);
                col_addmul(c, next, -q);
                if (f.h[row][c] != 0) clean = false;
            }
            if (clean) break;
        }
        if (f.h[row][next] == 0) continue;
        if (f.h[row][next] < 0) col_negate(next);
        // Reduce earlier columns at this pivot row for a canonical-ish form.
        for (std::size_t c = 0; c < next; ++c) {
            const Integer q = floor_div(f.h[row][c], f.h[row][next]);
            if (q != 0) col_addmul(c, next, -q);
        }
        f.pivots.emplace_back(row, next);
        ++next;
    }
    return f;
}

// One integer solution of A x = b, if any.
inline std::optional<IVec> solve_integer(const IMat& a, const IVec& b) {
    const std::size_t rows = a.size();
    const std::size_t cols = rows == 0 ? 0 : a[0].size();
    HermiteForm f = column_hermite(a);
    IVec residue = b;
    IVec z(cols, 0);
    for (const auto& [pr, pc] : f.pivots) {
        const Integer& p = f.h[pr][pc];
        if (residue[pr] % p != 0) {
            // Entries above this pivot row are already zero in column pc, and
            // later pivot columns vanish at row pr, so no solution exists.
        }
        const Integer q = residue[pr] / p;
        if (q * p != residue[pr]) return std::nullopt;
        z[pc] = q;
        for (std::size_t r = 0; r < rows; ++r) residue[r] -= q * f.h[r][pc];
    }
    for (std::size_t r = 0; r < rows; ++r)
        if (residue[r] != 0) return std::nullopt;
    return mat_vec(f.u, z);
}

// Basis of the integer kernel {x : A x = 0}.
inline std::vector<IVec> integer_kernel(const IMat& a) {
    const std::size_t cols = a.empty() ? 0 : a[0].size();
    HermiteForm f = column_hermite(a);
    std::vector<bool> pivot_col(cols, false);
    for (const auto& [pr, pc] : f.pivots) pivot_col[pc] = true;
    std::vector<IVec> basis;
    for (std::size_t c = 0; c < cols; ++c) {
        if (pivot_col[c]) continue;
        bool zero_col = true;
        for (std::size_t r = 0; r < a.size(); ++r)
            if (f.h[r][c] != 0) zero_col = false;
        if (!zero_col) continue;  // cannot happen in echelon form, defensive
        IVec v(cols, 0);
        for (std::size_t r = 0; r < cols; ++r) v[r] = f.u[r][c];
        basis.push_back(std::move(v));
    }
    return basis;
}

// Integer lattice spanned by a list of generator vectors in Z^dim.
class Lattice {
public:
    Lattice() = default;
    Lattice(std::size_t dim, const std::vector<IVec>& generators) : dim_(dim) {
        IMat a(dim, IVec(generators.size(), 0));
        for (std::size_t g = 0; g < generators.size(); ++g)
            for (std::size_t r = 0; r < dim; ++r) a[r][g] = generators[g][r];
        HermiteForm f = column_hermite(a);
        for (const auto& [pr, pc] : f.pivots) {
            IVec col(dim, 0);
            for (std::size_t r = 0; r < dim; ++r) col[r] = f.h[r][pc];
            basis_.push_back(std::move(col));
            pivot_rows_.push_back(pr);
        }
    }

    std::size_t dim() const { return dim_; }
    std::size_t rank() const { return basis_.size(); }
    const std::vector<IVec>& basis() const { return basis_; }
    const std::vector<std::size_t>& pivot_rows() const { return pivot_rows_; }

    bool contains(const IVec& v) const {
        IVec residue = v;
        for (std::size_t i = 0; i < basis_.size(); ++i) {
            const std::size_t pr = pivot_rows_[i];
            const Integer& p = basis_[i][pr];
            if (residue[pr] % p != 0) return false;
            const Integer q = residue[pr] / p;
            for (std::size_t r = 0; r < dim_; ++r) residue[r] -= q * basis_[i][r];
        }
        for (std::size_t r = 0; r < dim_; ++r)
            if (residue[r] != 0) return false;
        return true;
    }

    // The unique representative of v + L whose pivot-row coordinates lie in
    // [0, pivot).  Canonical for a fixed lattice.
    IVec reduce(const IVec& v) const {
        IVec out = v;
        for (std::size_t i = 0; i < basis_.size(); ++i) {
            const std::size_t pr = pivot_rows_[i];
            const Integer q = floor_div(out[pr], basis_[i][pr]);
            if (q == 0) continue;
            for (std::size_t r = 0; r < dim_; ++r) out[r] -= q * basis_[i][r];
        }
        return out;
    }

    // All lattice vectors with l1 norm at most radius (complete enumeration).
    std::vector<IVec> l1_ball(const Integer& radius) const {
        std::vector<IVec> out;
        IVec current(dim_, 0);
        enumerate(0, current, radius, out);
        return out;
    }

private:
    void enumerate(std::size_t i, IVec& current, const Integer& radius,
                   std::vector<IVec>& out) const {
        if (i == basis_.size()) {
            Integer l1 = 0;
            for (const Integer& c : current) l1 += abs(c);
            if (l1 <= radius) out.push_back(current);
            return;
        }
        const std::size_t pr = pivot_rows_[i];
        const Integer& p = basis_[i][pr];
        // After step i the coordinate at pivot row pr is frozen (later basis
        // vectors vanish there), so |current[pr] + z*p| <= radius bounds z.
        const Integer lo = -floor_div(radius + current[pr], p);
        const Integer hi = floor_div(radius - current[pr], p);
        for (Integer z = lo; z <= hi; ++z) {
            IVec next = current;
            for (std::size_t r = 0; r < dim_; ++r) next[r] += z * basis_[i][r];
            Integer partial = 0;
            for (std::size_t j = 0; j <= i; ++j) partial += abs(next[pivot_rows_[j]]);
            if (partial > radius) continue;
            enumerate(i + 1, next, radius, out);
        }
    }

    std::size_t dim_ = 0;
    std::vector<IVec> basis_;
    std::vector<std::size_t> pivot_rows_;
};

}  // namespace gognorm
