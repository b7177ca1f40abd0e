#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chain_complex.hpp"
#include "errors.hpp"
#include "lp.hpp"
#include "rational.hpp"

// Seminorms on homology via exact linear programming: the theta-weighted
// filling norms, their mapping-cone counterparts, the dual maximization, and
// Thurston-style representatives with small boundary.  Every value comes with
// the LP problem and certificate it was read from.

namespace gognorm {

struct Theta {
    bool infinite = false;
    Rational value = 0;

    static Theta finite(const Rational& q) {
        if (q < 0) throw NegativeThetaError("theta must be nonnegative");
        return Theta{false, q};
    }
    static Theta inf() { return Theta{true, 0}; }
};

inline Theta theta_from_string(const std::string& s) {
    if (s == "inf" || s == "infinity" || s == "oo") return Theta::inf();
    return Theta::finite(parse_rational(s));
}

inline std::string theta_to_string(const Theta& t) {
    return t.infinite ? "inf" : rational_to_string(t.value);
}

// theta below 1 leaves the range treated in the literature on dual cones;
// values are still well defined and computed, callers may want to flag it
inline bool theta_below_reference_range(const Theta& t) {
    return !t.infinite && t.value < 1;
}

struct SeminormResult {
    Rational value = 0;
    QVec minimizer;            // the representative attaining the value
    Rational boundary_l1 = 0;  // weighted l1 of its boundary
    std::vector<LPProblem> problems;
    std::vector<LPResult> certificates;
};

namespace detail {

struct FillingLP {
    LPBuilder bld;
    std::vector<int> p, q;    // chain coordinates split
    std::vector<int> bp, bm;  // filling in degree n+1
    std::vector<int> yp, ym;  // subcomplex freedom in degree n
    std::vector<int> r, s;    // boundary coordinates split
};

// representatives of [z] are z + (boundary of b) + y; the LP tracks the
// representative as p - q and, when the boundary term matters, its boundary
// as r - s
inline FillingLP filling_lp(const FiniteChainComplex& X, int n, const QVec& z,
                            const PairComplex* rel, const Rational& chain_cost_scale,
                            const Rational& bnd_cost_scale, bool with_boundary) {
    FillingLP F;
    size_t dn = X.dim(n), dup = X.dim(n + 1), dlo = X.dim(n - 1);
    for (size_t i = 0; i < dn; ++i) {
        Rational w = chain_cost_scale * X.weights[static_cast<size_t>(n)][i];
        F.p.push_back(F.bld.add_var("p" + std::to_string(i), w));
        F.q.push_back(F.bld.add_var("q" + std::to_string(i), w));
    }
    for (size_t k = 0; k < dup; ++k) {
        F.bp.push_back(F.bld.add_var("b+" + std::to_string(k), 0));
        F.bm.push_back(F.bld.add_var("b-" + std::to_string(k), 0));
    }
    size_t nsub = rel ? rel->sub_dim(n) : 0;
    for (size_t l = 0; l < nsub; ++l) {
        F.yp.push_back(F.bld.add_var("y+" + std::to_string(l), 0));
        F.ym.push_back(F.bld.add_var("y-" + std::to_string(l), 0));
    }
    if (with_boundary)
        for (size_t j = 0; j < dlo; ++j) {
            Rational w = bnd_cost_scale * X.weights[static_cast<size_t>(n) - 1][j];
            F.r.push_back(F.bld.add_var("r" + std::to_string(j), w));
            F.s.push_back(F.bld.add_var("s" + std::to_string(j), w));
        }
    for (size_t i = 0; i < dn; ++i) {
        std::vector<std::pair<int, Rational>> row{{F.p[i], 1}, {F.q[i], -1}};
        if (n + 1 <= X.top())
            for (size_t k = 0; k < dup; ++k) {
                const Rational& co = X.d[static_cast<size_t>(n) + 1][i][k];
                if (co != 0) {
                    row.emplace_back(F.bp[k], -co);
                    row.emplace_back(F.bm[k], co);
                }
            }
        for (size_t l = 0; l < nsub; ++l)
            if (static_cast<size_t>(rel->sub[static_cast<size_t>(n)][l]) == i) {
                row.emplace_back(F.yp[l], -1);
                row.emplace_back(F.ym[l], 1);
            }
        F.bld.add_row(std::move(row), z[i]);
    }
    if (with_boundary && n >= 1)
        for (size_t j = 0; j < dlo; ++j) {
            std::vector<std::pair<int, Rational>> row{{F.r[j], 1}, {F.s[j], -1}};
            for (size_t i = 0; i < dn; ++i) {
                const Rational& co = X.d[static_cast<size_t>(n)][j][i];
                if (co != 0) {
                    row.emplace_back(F.p[i], -co);
                    row.emplace_back(F.q[i], co);
                }
            }
            F.bld.add_row(std::move(row), 0);
        }
    return F;
}

inline QVec read_split(const QVec& x, const std::vector<int>& plus,
                       const std::vector<int>& minus) {
    QVec out(plus.size(), Rational(0));
    for (size_t i = 0; i < plus.size(); ++i)
        out[i] = x[static_cast<size_t>(plus[i])] - x[static_cast<size_t>(minus[i])];
    return out;
}

inline LPResult solve_expect_optimal(const LPProblem& prob, const char* what) {
    LPResult res = lp_solve(prob);
    if (res.status != LPStatus::Optimal)
        throw Error(std::string(what) + ": expected a bounded feasible program");
    std::string err = lp_verify(prob, res);
    if (!err.empty()) throw Error(std::string(what) + ": certificate failed: " + err);
    return res;
}

}  // namespace detail

// weighted l1 seminorm of the class of z in degree n, with theta times the
// boundary norm added; relative classes pass the pair and may shift z by
// subcomplex chains
inline SeminormResult homology_seminorm(const FiniteChainComplex& X, int n, const QVec& z,
                                        const Theta& theta,
                                        const PairComplex* rel = nullptr) {
    if (z.size() != X.dim(n)) throw MalformedProblemError("class has the wrong dimension");
    QVec dz = boundary(X, n, z);
    if (rel) {
        if (&rel->X != &X) throw GraphMismatchError("pair does not wrap this complex");
        if (!sub_supported(*rel, n - 1, dz))
            throw NotACycleError("boundary does not land in the subcomplex");
    } else {
        for (const Rational& v : dz)
            if (v != 0) throw NotACycleError("chain is not a cycle");
    }

    SeminormResult out;
    if (!theta.infinite) {
        bool with_b = theta.value > 0 && n >= 1;
        auto F = detail::filling_lp(X, n, z, rel, Rational(1), theta.value, with_b);
        LPProblem prob = F.bld.build();
        LPResult res = detail::solve_expect_optimal(prob, "seminorm");
        out.value = res.value;
        out.minimizer = detail::read_split(res.x, F.p, F.q);
        out.boundary_l1 = l1(X, n - 1, boundary(X, n, out.minimizer));
        out.problems.push_back(std::move(prob));
        out.certificates.push_back(std::move(res));
        return out;
    }

    // theta = infinity, lexicographic: first the least achievable boundary
    // norm, then the least chain norm among those  representatives
    auto F1 = detail::filling_lp(X, n, z, rel, Rational(0), Rational(1), true);
    LPProblem prob1 = F1.bld.build();
    LPResult res1 = detail::solve_expect_optimal(prob1, "seminorm stage one");
    Rational least_boundary = res1.value;

    auto F2 = detail::filling_lp(X, n, z, rel, Rational(1), Rational(0), true);
    std::vector<std::pair<int, Rational>> pin;
    for (size_t j = 0; j < F2.r.size(); ++j) {
        const Rational& w = X.weights[static_cast<size_t>(n) - 1][j];
        pin.emplace_back(F2.r[j], w);
        pin.emplace_back(F2.s[j], w);
    }
    F2.bld.add_row(std::move(pin), least_boundary);
    LPProblem prob2 = F2.bld.build();
    LPResult res2 = detail::solve_expect_optimal(prob2, "seminorm stage two");
    out.value = res2.value;
    out.minimizer = detail::read_split(res2.x, F2.p, F2.q);
    out.boundary_l1 = l1(X, n - 1, boundary(X, n, out.minimizer));
    out.problems = {std::move(prob1), std::move(prob2)};
    out.certificates = {std::move(res1), std::move(res2)};
    return out;
}

inline SeminormResult homology_seminorm(const PairComplex& P, int n, const QVec& z,
                                        const Theta& theta) {
    return homology_seminorm(P.X, n, z, theta, &P);
}

// ---------------------------------------------------------------------------
// mapping-cone seminorm

struct ConeSeminormResult {
    Rational value = 0;
    ConeChain minimizer;
    std::vector<LPProblem> problems;
    std::vector<LPResult> certificates;
};

inline ConeSeminormResult cone_seminorm(const PairComplex& P, const ConeChain& zc,
                                        const Theta& theta) {
    if (theta.infinite) throw Error("cone seminorms need finite theta");
    if (theta.value <= 0) throw NegativeThetaError("cone seminorms need theta > 0");
    int n = zc.degree;
    if (zc.u.size() != P.X.dim(n) || zc.v.size() != P.sub_dim(n - 1))
        throw MalformedProblemError("cone chain has the wrong dimensions");
    if (!cone_is_cycle(P, zc)) throw NotAConeCycleError("cone chain is not a cycle");

    // representatives differ by the cone boundary of (b, c):
    //   u + db + ic   and   v + (cone sign) dc
    Rational cone_sign = faults::cone_sign ? Rational(1) : Rational(-1);
    LPBuilder bld;
    std::vector<int> p, q, r, s, bp, bm, cp, cm;
    size_t dn = P.X.dim(n), dup = P.X.dim(n + 1);
    size_t vlo = P.sub_dim(n - 1), vn = P.sub_dim(n);
    for (size_t i = 0; i < dn; ++i) {
        Rational w = P.X.weights[static_cast<size_t>(n)][i];
        p.push_back(bld.add_var("p" + std::to_string(i), w));
        q.push_back(bld.add_var("q" + std::to_string(i), w));
    }
    for (size_t k = 0; k < vlo; ++k) {
        size_t idx = static_cast<size_t>(P.sub[static_cast<size_t>(n) - 1][k]);
        Rational w = theta.value * P.X.weights[static_cast<size_t>(n) - 1][idx];
        r.push_back(bld.add_var("r" + std::to_string(k), w));
        s.push_back(bld.add_var("s" + std::to_string(k), w));
    }
    for (size_t k = 0; k < dup; ++k) {
        bp.push_back(bld.add_var("b+" + std::to_string(k), 0));
        bm.push_back(bld.add_var("b-" + std::to_string(k), 0));
    }
    for (size_t l = 0; l < vn; ++l) {
        cp.push_back(bld.add_var("c+" + std::to_string(l), 0));
        cm.push_back(bld.add_var("c-" + std::to_string(l), 0));
    }
    for (size_t i = 0; i < dn; ++i) {
        std::vector<std::pair<int, Rational>> row{{p[i], 1}, {q[i], -1}};
        if (n + 1 <= P.X.top())
            for (size_t k = 0; k < dup; ++k) {
                const Rational& co = P.X.d[static_cast<size_t>(n) + 1][i][k];
                if (co != 0) {
                    row.emplace_back(bp[k], -co);
                    row.emplace_back(bm[k], co);
                }
            }
        for (size_t l = 0; l < vn; ++l)
            if (static_cast<size_t>(P.sub[static_cast<size_t>(n)][l]) == i) {
                row.emplace_back(cp[l], -1);
                row.emplace_back(cm[l], 1);
            }
        bld.add_row(std::move(row), zc.u[i]);
    }
    for (size_t k = 0; k < vlo; ++k) {
        std::vector<std::pair<int, Rational>> row{{r[k], 1}, {s[k], -1}};
        size_t rowidx = static_cast<size_t>(P.sub[static_cast<size_t>(n) - 1][k]);
        for (size_t l = 0; l < vn; ++l) {
            size_t colidx = static_cast<size_t>(P.sub[static_cast<size_t>(n)][l]);
            const Rational& co = P.X.d[static_cast<size_t>(n)][rowidx][colidx];
            if (co != 0) {
                row.emplace_back(cp[l], -cone_sign * co);
                row.emplace_back(cm[l], cone_sign * co);
            }
        }
        bld.add_row(std::move(row), zc.v[k]);
    }
    LPProblem prob = bld.build();
    LPResult res = detail::solve_expect_optimal(prob, "cone seminorm");
    ConeSeminormResult out;
    out.value = res.value;
    out.minimizer = ConeChain{n, detail::read_split(res.x, p, q), detail::read_split(res.x, r, s)};
    out.problems.push_back(std::move(prob));
    out.certificates.push_back(std::move(res));
    return out;
}

// ---------------------------------------------------------------------------
// the comparison maps between cone classes and relative classes

inline QVec beta_forward(const PairComplex& P, const ConeChain& zc) {
    if (!cone_is_cycle(P, zc)) throw NotAConeCycleError("cone chain is not a cycle");
    return zc.u;
}

inline ConeChain beta_inverse(const PairComplex& P, int n, const QVec& z) {
    if (z.size() != P.X.dim(n)) throw MalformedProblemError("class has the wrong dimension");
    QVec dz = boundary(P.X, n, z);
    if (!sub_supported(P, n - 1, dz))
        throw NotACycleError("boundary does not land in the subcomplex");
    QVec v = restrict_sub(P, n - 1, dz);
    for (Rational& x : v) x = -x;
    return ConeChain{n, z, std::move(v)};
}

// ---------------------------------------------------------------------------
// dual maximization: the seminorm as the best value of a functional from the
// dual unit ball (an independent encoding; agreement with the filling LP is
// exact linear programming duality)

struct DualityResult {
    Rational value = 0;
    QVec f;  // functional on degree n
    QVec g;  // functional on degree n-1 (empty when theta = 0)
    std::vector<LPProblem> problems;
    std::vector<LPResult> certificates;
};

inline DualityResult duality_max(const FiniteChainComplex& X, int n, const QVec& z,
                                 const Theta& theta, const PairComplex* rel = nullptr) {
    if (theta.infinite) throw Error("duality is not available at theta = infinity");
    if (z.size() != X.dim(n)) throw MalformedProblemError("class has the wrong dimension");
    QVec dz = boundary(X, n, z);
    if (rel) {
        if (&rel->X != &X) throw GraphMismatchError("pair does not wrap this complex");
        if (!sub_supported(*rel, n - 1, dz))
            throw NotACycleError("boundary does not land in the subcomplex");
    } else {
        for (const Rational& v : dz)
            if (v != 0) throw NotACycleError("chain is not a cycle");
    }
    bool with_g = theta.value > 0 && n >= 1;
    size_t dn = X.dim(n), dlo = X.dim(n - 1), dup = X.dim(n + 1);

    LPBuilder bld;
    std::vector<int> fp, fm, gp, gm;
    // maximize f(z) + g(dz)  ==  minimize the negated objective
    for (size_t i = 0; i < dn; ++i) {
        fp.push_back(bld.add_var("f+" + std::to_string(i), -z[i]));
        fm.push_back(bld.add_var("f-" + std::to_string(i), z[i]));
    }
    if (with_g)
        for (size_t j = 0; j < dlo; ++j) {
            gp.push_back(bld.add_var("g+" + std::to_string(j), -dz[j]));
            gm.push_back(bld.add_var("g-" + std::to_string(j), dz[j]));
        }
    // the dual ball: |f_i| <= w_i and |g_j| <= theta w'_j
    for (size_t i = 0; i < dn; ++i) {
        int hi = bld.add_var("fbhi" + std::to_string(i), 0);
        int lo = bld.add_var("fblo" + std::to_string(i), 0);
        const Rational& w = X.weights[static_cast<size_t>(n)][i];
        bld.add_row({{fp[i], 1}, {fm[i], -1}, {hi, 1}}, w);
        bld.add_row({{fp[i], -1}, {fm[i], 1}, {lo, 1}}, w);
    }
    if (with_g)
        for (size_t j = 0; j < dlo; ++j) {
            int hi = bld.add_var("gbhi" + std::to_string(j), 0);
            int lo = bld.add_var("gblo" + std::to_string(j), 0);
            Rational w = theta.value * X.weights[static_cast<size_t>(n) - 1][j];
            bld.add_row({{gp[j], 1}, {gm[j], -1}, {hi, 1}}, w);
            bld.add_row({{gp[j], -1}, {gm[j], 1}, {lo, 1}}, w);
        }
    // f kills boundaries in degree n
    if (n + 1 <= X.top())
        for (size_t k = 0; k < dup; ++k) {
            std::vector<std::pair<int, Rational>> row;
            for (size_t i = 0; i < dn; ++i) {
                const Rational& co = X.d[static_cast<size_t>(n) + 1][i][k];
                if (co != 0) {
                    row.emplace_back(fp[i], co);
                    row.emplace_back(fm[i], -co);
                }
            }
            if (!row.empty()) bld.add_row(std::move(row), 0);
        }
    // relative classes: the functional vanishes on subcomplex chains
    if (rel)
        for (size_t l = 0; l < rel->sub_dim(n); ++l) {
            size_t idx = static_cast<size_t>(rel->sub[static_cast<size_t>(n)][l]);
            std::vector<std::pair<int, Rational>> row{{fp[idx], 1}, {fm[idx], -1}};
            if (with_g)
                for (size_t j = 0; j < dlo; ++j) {
                    const Rational& co = X.d[static_cast<size_t>(n)][j][idx];
                    if (co != 0) {
                        row.emplace_back(gp[j], co);
                        row.emplace_back(gm[j], -co);
                    }
                }
            bld.add_row(std::move(row), 0);
        }
    LPProblem prob = bld.build();
    LPResult res = detail::solve_expect_optimal(prob, "duality");
    DualityResult out;
    out.value = -res.value;
    out.f = detail::read_split(res.x, fp, fm);
    if (with_g) out.g = detail::read_split(res.x, gp, gm);
    out.problems.push_back(std::move(prob));
    out.certificates.push_back(std::move(res));
    return out;
}

inline DualityResult duality_max(const PairComplex& P, int n, const QVec& z,
                                 const Theta& theta) {
    return duality_max(P.X, n, z, theta, &P);
}

// ---------------------------------------------------------------------------
// representatives with prescribed boundary control

enum class ThurstonStatus { Success, NotGuaranteed };

struct ThurstonResult {
    ThurstonStatus status = ThurstonStatus::NotGuaranteed;
    QVec representative;
    Rational chain_l1 = 0;
    Rational boundary_l1 = 0;
    Rational class_norm = 0;  // the relative seminorm at theta = 0
    Rational theta = 0;       // the weight used for the trade-off program
};

// pick theta = (norm + eps)/eps and take the theta-minimal representative:
// whenever its weighted value stays within norm + eps, the chain norm and the
// boundary norm bounds both follow
inline ThurstonResult thurston_representative(const PairComplex& P, int n, const QVec& z,
                                              const Rational& eps) {
    if (eps <= 0) throw NonpositiveEpsilonError("eps must be positive");
    ThurstonResult out;
    out.class_norm = homology_seminorm(P, n, z, Theta::finite(0)).value;
    out.theta = (out.class_norm + eps) / eps;
    SeminormResult r = homology_seminorm(P, n, z, Theta::finite(out.theta));
    out.representative = r.minimizer;
    out.chain_l1 = l1(P.X, n, r.minimizer);
    out.boundary_l1 = r.boundary_l1;
    bool ok = out.chain_l1 <= out.class_norm + eps && out.boundary_l1 <= eps;
    out.status = ok ? ThurstonStatus::Success : ThurstonStatus::NotGuaranteed;
    return out;
}

}  // namespace gognorm
