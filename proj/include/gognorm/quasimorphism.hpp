#pragma once

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "normal_form.hpp"
#include "transplant.hpp"
#include "tree.hpp"

// Split quasimorphisms on free products: odd bounded functions on the vertex
// groups, the syllable-sum cochain alpha, the bounded cocycle R = d(alpha)
// with its three-term closed formula, inhomogeneous/homogeneous translation,
// defect bounds, and the check that R and the barycentric transplant compute
// the same class representative on point triples.

namespace gognorm {

// ---------------------------------------------------------------------------
// odd bounded functions

struct OddBoundedFunction {
    int vertex = 0;  // owning site
    std::function<Rational(const GroupElt&)> eval;
    Rational bound = 0;
};

// one function per graph vertex, indexed by site
using OddFamily = std::vector<OddBoundedFunction>;

// Spot-check oddness, the declared bound, and f(1) = 0 on the ball of the
// given radius.  Violations are hard errors: everything downstream silently
// produces garbage on a non-odd family.
inline void validate_odd_family(const GraphOfGroups& g, const OddFamily& fam,
                                const Integer& radius = Integer(2)) {
    if (fam.size() != g.nv())
        throw GraphMismatchError("odd family needs one function per graph vertex");
    for (size_t v = 0; v < fam.size(); ++v) {
        const OddBoundedFunction& f = fam[v];
        if (f.vertex != static_cast<int>(v))
            throw GraphMismatchError("odd family entry filed under the wrong vertex");
        if (!f.eval) throw GraphMismatchError("odd family entry has no evaluator");
        const GroupSpec& spec = g.spec(static_cast<int>(v));
        if (f.eval(ge_identity(spec)) != 0)
            throw OddnessViolationError("odd function must vanish at the identity");
        for (const GroupElt& x : ge_ball(spec, radius)) {
            Rational fx = f.eval(x);
            if (fx != -f.eval(ge_inv(spec, x)))
                throw OddnessViolationError("odd function fails f(x^-1) = -f(x) at " +
                                            ge_to_string(spec, x));
            if (rational_abs(fx) > f.bound)
                throw Error("odd function exceeds its declared bound at " +
                            ge_to_string(spec, x));
        }
    }
}

inline OddFamily make_family(const GraphOfGroups& g, std::vector<OddBoundedFunction> parts,
                             const Integer& check_radius = Integer(2)) {
    validate_odd_family(g, parts, check_radius);
    return parts;
}

inline Rational family_max_bound(const OddFamily& fam) {
    Rational m = 0;
    for (const OddBoundedFunction& f : fam)
        if (f.bound > m) m = f.bound;
    return m;
}

// ---------------------------------------------------------------------------
// built-in odd functions
//
// The closed-form ones read off the exponent of a cyclic (one-generator)
// group; tabulated functions work over any vertex group.

inline Integer cyclic_exponent(const GroupSpec& spec, const GroupElt& x) {
    if (spec.rank() == 0) return 0;
    if (spec.rank() != 1)
        throw Error("built-in odd functions need a one-generator vertex group");
    if (spec.kind == GroupKind::Free) return x.word.empty() ? Integer(0) : x.word[0].second;
    const Integer& d = spec.invariant_factors[0];
    return d == 0 ? x.coords[0] : ge_balanced_coord(x.coords[0], d);
}

inline OddBoundedFunction odd_zero(int v) {
    return {v, [](const GroupElt&) { return Rational(0); }, Rational(0)};
}

// f(a^k) = sgn(k)
inline OddBoundedFunction odd_sign(const GraphOfGroups& g, int v) {
    const GroupSpec* spec = &g.spec(v);
    return {v,
            [spec](const GroupElt& x) {
                Integer k = cyclic_exponent(*spec, x);
                return Rational(k > 0 ? 1 : (k < 0 ? -1 : 0));
            },
            Rational(1)};
}

// f(a^k) = min(max(k, -N), N) / N
inline OddBoundedFunction odd_clamp(const GraphOfGroups& g, int v, const Integer& N) {
    if (N < 1) throw Error("clamp needs a positive cutoff");
    const GroupSpec* spec = &g.spec(v);
    return {v,
            [spec, N](const GroupElt& x) {
                Integer k = cyclic_exponent(*spec, x);
                if (k > N) k = N;
                if (k < -N) k = -N;
                return Rational(k) / Rational(N);
            },
            Rational(1)};
}

// f(a^k) = sgn(k) when |k| lies in [lo, hi] and |k| has the given parity,
// else 0.  An indicator window made odd by the sign factor.
inline OddBoundedFunction odd_parity_window(const GraphOfGroups& g, int v, int parity,
                                            const Integer& lo, const Integer& hi) {
    if (parity != 0 && parity != 1) throw Error("parity must be 0 or 1");
    if (lo < 0 || hi < lo) throw Error("window bounds must satisfy 0 <= lo <= hi");
    const GroupSpec* spec = &g.spec(v);
    return {v,
            [spec, parity, lo, hi](const GroupElt& x) {
                Integer k = cyclic_exponent(*spec, x);
                Integer a = k < 0 ? Integer(-k) : k;
                if (a < lo || a > hi || a % 2 != parity) return Rational(0);
                return Rational(k > 0 ? 1 : -1);
            },
            Rational(1)};
}

// Finitely many prescribed values, default 0 elsewhere; each entry also fixes
// the value at the inverse.  Conflicting prescriptions are rejected.
inline OddBoundedFunction odd_tabulated(const GraphOfGroups& g, int v,
                                        const std::vector<std::pair<GroupElt, Rational>>& entries) {
    const GroupSpec* spec = &g.spec(v);
    auto less = [spec](const GroupElt& a, const GroupElt& b) { return ge_less(*spec, a, b); };
    auto table = std::make_shared<std::map<GroupElt, Rational, decltype(less)>>(less);
    Rational bound = 0;
    auto put = [&](const GroupElt& x, const Rational& val) {
        auto [it, fresh] = table->emplace(x, val);
        if (!fresh && it->second != val)
            throw OddnessViolationError("tabulated values conflict at " + ge_to_string(*spec, x));
    };
    for (const auto& [x, val] : entries) {
        if (ge_is_identity(x) && val != 0)
            throw OddnessViolationError("odd function must vanish at the identity");
        put(x, val);
        put(ge_inv(*spec, x), -val);
        if (rational_abs(val) > bound) bound = rational_abs(val);
    }
    return {v,
            [table](const GroupElt& x) {
                auto it = table->find(x);
                return it == table->end() ? Rational(0) : it->second;
            },
            bound};
}

// ---------------------------------------------------------------------------
// the syllable-sum cochain alpha
//
// Everything below lives on free products: the graph is a tree and all edge
// groups are trivial, so a loop's normal form is exactly its reduced
// free-product expression (the nontrivial vertex syllables, consecutive ones
// in distinct factors).

inline void require_free_product(const GraphOfGroups& g) {
    for (size_t e = 0; e < g.ne(); ++e) {
        if (!g.edge_spec(static_cast<int>(e)).generators.empty())
            throw NotFreeProductError("edge groups must be trivial");
        if (!g.is_tree_edge(static_cast<int>(e)))
            throw NotFreeProductError("graph must be a tree: free letters are not vertex syllables");
    }
}

struct Syllable {
    int site;
    GroupElt elt;
};

inline std::vector<Syllable> free_syllables(const GraphOfGroups& g, const NormalForm& x) {
    std::vector<Syllable> out;
    for (size_t i = 0; i < x.elts.size(); ++i)
        if (!ge_is_identity(x.elts[i]))
            out.push_back({nf_site(g, x, static_cast<int>(i)), x.elts[i]});
    return out;
}

// alpha(f)(x) = sum of f over the syllables of the reduced expression.
// Unbounded in general, but d(alpha) is bounded (see rolli_R).
inline Rational alpha(const GraphOfGroups& g, const OddFamily& fam, const NormalForm& x) {
    require_free_product(g);
    if (fam.size() != g.nv())
        throw GraphMismatchError("odd family needs one function per graph vertex");
    Rational sum = 0;
    for (const Syllable& s : free_syllables(g, x)) sum += fam[s.site].eval(s.elt);
    return sum;
}

// ---------------------------------------------------------------------------
// the bounded cocycle R = d(alpha)

// Maximal cancellation between the reduced expressions of x and y:
// x = a g1 b and y = b^-1 g2 c with b the cancelled block.  When the
// adjacent survivors g1, g2 sit in the same factor they merge (g1 g2 != 1,
// else the block b was not maximal); in distinct factors nothing merges; and
// when either side is exhausted the product collapses onto a subword.
struct CancelSplit {
    enum Outcome { Merged, Disjoint, Exhausted } outcome = Exhausted;
    size_t cancelled = 0;            // syllables of b
    std::vector<Syllable> x_sylls;   // full reduced expression of x
    std::vector<Syllable> y_sylls;   // full reduced expression of y
    int site = -1;                   // Merged: common factor of g1, g2
    GroupElt g1, g2;                 // Merged: the survivors
};

inline CancelSplit cancel_split(const GraphOfGroups& g, const NormalForm& x,
                                const NormalForm& y) {
    CancelSplit s;
    s.x_sylls = free_syllables(g, x);
    s.y_sylls = free_syllables(g, y);
    size_t p = s.x_sylls.size(), q = s.y_sylls.size();
    size_t r = 0;
    while (r < p && r < q) {
        const Syllable& u = s.x_sylls[p - 1 - r];
        const Syllable& w = s.y_sylls[r];
        if (u.site != w.site || u.elt != ge_inv(g.spec(u.site), w.elt)) break;
        ++r;
    }
    s.cancelled = r;
    if (r == p || r == q) {
        s.outcome = CancelSplit::Exhausted;
        return s;
    }
    const Syllable& u = s.x_sylls[p - 1 - r];
    const Syllable& w = s.y_sylls[r];
    if (u.site != w.site) {
        s.outcome = CancelSplit::Disjoint;
        return s;
    }
    s.outcome = CancelSplit::Merged;
    s.site = u.site;
    s.g1 = u.elt;
    s.g2 = w.elt;
    return s;
}

// R(f)(x, y) = f(g2) - f(g1 g2) + f(g1) on the merged survivors.  Equals
// alpha(y) - alpha(xy) + alpha(x) always: in the disjoint case both survivors
// read as trivial and the three alpha sums cancel termwise, and in the
// exhausted case we fall back to re-reducing xy and evaluating the coboundary
// directly (the closed formula's split does not exist there).
inline Rational rolli_R(const GraphOfGroups& g, const OddFamily& fam, const NormalForm& x,
                        const NormalForm& y) {
    require_free_product(g);
    if (fam.size() != g.nv())
        throw GraphMismatchError("odd family needs one function per graph vertex");
    CancelSplit s = cancel_split(g, x, y);
    switch (s.outcome) {
        case CancelSplit::Merged: {
            const GroupSpec& spec = g.spec(s.site);
            const auto& f = fam[s.site].eval;
            return f(s.g2) - f(ge_mul(spec, s.g1, s.g2)) + f(s.g1);
        }
        case CancelSplit::Disjoint:
            return 0;
        case CancelSplit::Exhausted:
            return alpha(g, fam, y) - alpha(g, fam, nf_mul(g, x, y)) + alpha(g, fam, x);
    }
    return 0;  // unreachable
}

// ---------------------------------------------------------------------------
// inhomogeneous cochains and the homogeneous translation

struct InhomCochain {
    int degree = 1;  // number of group arguments
    std::function<Rational(const std::vector<NormalForm>&)> eval;
};

inline InhomCochain alpha_cochain(const GraphOfGroups& g, const OddFamily& fam) {
    const GraphOfGroups* gp = &g;
    return {1, [gp, fam](const std::vector<NormalForm>& xs) {
                if (xs.size() != 1) throw Error("degree-1 cochain takes one argument");
                return alpha(*gp, fam, xs[0]);
            }};
}

inline InhomCochain rolli_cochain(const GraphOfGroups& g, const OddFamily& fam) {
    const GraphOfGroups* gp = &g;
    return {2, [gp, fam](const std::vector<NormalForm>& xs) {
                if (xs.size() != 2) throw Error("degree-2 cochain takes two arguments");
                return rolli_R(*gp, fam, xs[0], xs[1]);
            }};
}

// d(f)(x_1..x_{n+1}) = f(drop first) + sum (-1)^i f(merge at i) + (-1)^{n+1} f(drop last)
inline InhomCochain inhom_coboundary(const GraphOfGroups& g, const InhomCochain& f) {
    const GraphOfGroups* gp = &g;
    int n = f.degree;
    return {n + 1, [gp, f, n](const std::vector<NormalForm>& xs) {
                if (static_cast<int>(xs.size()) != n + 1)
                    throw Error("coboundary argument count mismatch");
                Rational sum = 0;
                std::vector<NormalForm> sub(xs.begin() + 1, xs.end());
                sum += f.eval(sub);
                int sgn = -1;
                for (int i = 0; i + 1 <= n; ++i) {
                    sub.assign(xs.begin(), xs.end());
                    sub[i] = nf_mul(*gp, xs[i], xs[i + 1]);
                    sub.erase(sub.begin() + i + 1);
                    sum += Rational(sgn) * f.eval(sub);
                    sgn = -sgn;
                }
                sub.assign(xs.begin(), xs.end() - 1);
                sum += Rational(sgn) * f.eval(sub);
                return sum;
            }};
}

// h(f)(x_0..x_n) = f(x_0^-1 x_1, ..., x_{n-1}^-1 x_n): the isometric bridge
// to left-invariant cochains on tuples.
inline GCochain homogenize(const GraphOfGroups& g, const InhomCochain& f,
                           const Rational& declared_bound = Rational(0)) {
    const GraphOfGroups* gp = &g;
    GCochain out;
    out.degree = f.degree;
    out.bound = declared_bound;
    out.eval = [gp, f](const std::vector<NormalForm>& xs) {
        if (static_cast<int>(xs.size()) != f.degree + 1)
            throw Error("homogeneous argument count mismatch");
        std::vector<NormalForm> quot;
        quot.reserve(xs.size() - 1);
        for (size_t i = 0; i + 1 < xs.size(); ++i)
            quot.push_back(nf_mul(*gp, nf_inv(*gp, xs[i]), xs[i + 1]));
        return f.eval(quot);
    };
    return out;
}

// ---------------------------------------------------------------------------
// defect

// Largest |R| over pairs of words with at most L syllables and syllable
// exponents bounded by E.  Every value of R is either zero or a single-merge
// value f(g2) - f(g1 g2) + f(g1) with g1, g2 syllables of the two inputs, so
// for L >= 1 the sup over all bounded pairs is attained on one-syllable
// pairs; we enumerate those exactly instead of sweeping word pairs.
inline Rational defect(const GraphOfGroups& g, const OddFamily& fam, int L, const Integer& E) {
    require_free_product(g);
    if (L < 1 || E < 1) throw Error("defect needs syllable and exponent bounds >= 1");
    validate_odd_family(g, fam, E < 2 ? E : Integer(2));
    Rational best = 0;
    for (size_t v = 0; v < g.nv(); ++v) {
        const GroupSpec& spec = g.spec(static_cast<int>(v));
        const auto& f = fam[v].eval;
        std::vector<GroupElt> ball = ge_ball(spec, E);
        for (const GroupElt& g1 : ball) {
            if (ge_is_identity(g1)) continue;
            Rational f1 = f(g1);
            for (const GroupElt& g2 : ball) {
                if (ge_is_identity(g2)) continue;
                GroupElt prod = ge_mul(spec, g1, g2);
                if (ge_is_identity(prod)) continue;  // excluded split; R = 0 there
                Rational val = rational_abs(f(g2) - f(prod) + f1);
                if (val > best) best = val;
            }
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// the transplant diagram on point triples
//
// Two routes from an odd family to a number on a triple of points over the
// group: (top) the cocycle R read through the homogeneous translation and the
// group coordinate of each point; (left-bottom) the local coboundary
// cochains pushed to local points and transplanted.  Both are checked to
// agree, and the barycenter the transplant evaluates at is checked against
// the factor split of the triple's quotients.

// local group coordinate of a point of the vertex star (free product: each
// edge coset is the singleton of its representative)
inline GroupElt sv_group_coordinate(const GraphOfGroups& g, const SvPoint& s) {
    if (s.kind == SvPoint::Element) return s.h;
    if (!g.edge_spec(s.edge).generators.empty())
        throw NotFreeProductError("local group coordinates need trivial edge groups");
    return s.rep;
}

// the family v -> mu_v(h^2(d f_v)) of local alternating two-cocycles
inline VertexFamily diagram_family(const GraphOfGroups& g, const OddFamily& fam) {
    require_free_product(g);
    validate_odd_family(g, fam);
    const GraphOfGroups* gp = &g;
    VertexFamily out;
    for (size_t v = 0; v < g.nv(); ++v) {
        VCochain c;
        c.degree = 2;
        c.bound = Rational(3) * fam[v].bound;
        c.alternating = true;  // three-term coboundary of an odd function
        const auto f = fam[v].eval;
        const GroupSpec* spec = &g.spec(static_cast<int>(v));
        c.eval = [gp, f, spec](const std::vector<SvPoint>& ss) {
            if (ss.size() != 3) throw Error("local two-cocycle takes three points");
            GroupElt y0 = sv_group_coordinate(*gp, ss[0]);
            GroupElt y1 = sv_group_coordinate(*gp, ss[1]);
            GroupElt y2 = sv_group_coordinate(*gp, ss[2]);
            GroupElt q1 = ge_mul(*spec, ge_inv(*spec, y0), y1);
            GroupElt q2 = ge_mul(*spec, ge_inv(*spec, y1), y2);
            return f(q2) - f(ge_mul(*spec, q1, q2)) + f(q1);
        };
        out.push_back(std::move(c));
    }
    return out;
}

// Placement of a group element as a point over the group: node < nv picks the
// vertex coset pair (x, node), node >= nv picks the midpoint x * m_e of the
// (node - nv)-th geometric edge class.
inline std::vector<int> placement_nodes(const GraphOfGroups& g, bool include_midpoints) {
    std::vector<int> nodes;
    for (size_t v = 0; v < g.nv(); ++v) nodes.push_back(static_cast<int>(v));
    if (include_midpoints)
        for (size_t e = 0; e < g.ne(); ++e)
            if (g.geom_min(static_cast<int>(e)) == static_cast<int>(e))
                nodes.push_back(static_cast<int>(g.nv() + e));
    return nodes;
}

inline SPoint place_point(const GraphOfGroups& g, const NormalForm& x, int node) {
    if (node < static_cast<int>(g.nv())) return spoint_group(x, node);
    return spoint_edge_coset(g, x, node - static_cast<int>(g.nv()));
}

struct DiagramFailure {
    std::array<NormalForm, 3> triple;
    std::array<int, 3> nodes;
    std::string what;
};

struct DiagramReport {
    size_t checked = 0;              // (triple, placement) pairs compared
    size_t barycenters_checked = 0;  // placements where the split predicts the barycenter
    std::vector<DiagramFailure> failures;
    bool ok() const { return failures.empty(); }
};

// For each triple (x0, x1, x2) and each placement of the three entries on
// subdivision nodes:
//   (i)  on vertex placements, when the quotients x0^-1 x1 = a g1 b and
//        x1^-1 x2 = b^-1 g2 c merge in a common factor, the barycenter of the
//        three projected points must be the vertex x0 * a * (that factor);
//   (ii) the transplanted local coboundary family and R itself must give the
//        same value on the triple.
inline DiagramReport diagram_check(const GraphOfGroups& g, const OddFamily& fam,
                                   const std::vector<std::array<NormalForm, 3>>& triples,
                                   bool include_midpoints = true) {
    require_free_product(g);
    VertexFamily dfam = diagram_family(g, fam);  // validates the family
    std::vector<int> nodes = placement_nodes(g, include_midpoints);
    DiagramReport rep;
    auto fail = [&](const std::array<NormalForm, 3>& t, const std::array<int, 3>& ns,
                    std::string what) {
        rep.failures.push_back({t, ns, std::move(what)});
    };
    for (const auto& t : triples) {
        NormalForm q01 = nf_mul(g, nf_inv(g, t[0]), t[1]);
        NormalForm q12 = nf_mul(g, nf_inv(g, t[1]), t[2]);
        CancelSplit split = cancel_split(g, q01, q12);
        Rational rhs = rolli_R(g, fam, q01, q12);
        for (int n0 : nodes)
            for (int n1 : nodes)
                for (int n2 : nodes) {
                    std::array<int, 3> ns{n0, n1, n2};
                    std::vector<SPoint> pts{place_point(g, t[0], n0), place_point(g, t[1], n1),
                                            place_point(g, t[2], n2)};
                    bool vertex_placement = n0 < static_cast<int>(g.nv()) &&
                                            n1 < static_cast<int>(g.nv()) &&
                                            n2 < static_cast<int>(g.nv());
                    if (vertex_placement && split.outcome == CancelSplit::Merged) {
                        ++rep.barycenters_checked;
                        // x0 * a, with a the block left of the first survivor
                        NormalForm pre = t[0];
                        size_t keep = split.x_sylls.size() - 1 - split.cancelled;
                        for (size_t i = 0; i < keep; ++i)
                            pre = nf_mul(g, pre,
                                         nf_embed(g, split.x_sylls[i].site, split.x_sylls[i].elt));
                        TPrimeVertex want = as_tprime(project_vertex(g, pre, split.site));
                        std::vector<TPrimeVertex> proj;
                        for (const SPoint& p : pts) proj.push_back(sp_project(g, p));
                        std::optional<TreeVertex> got = barycenter(g, proj);
                        if (!got)
                            fail(t, ns, "split predicts a barycenter but none was found");
                        else if (!(as_tprime(*got) == want))
                            fail(t, ns, "barycenter disagrees with the factor split");
                    }
                    Rational lhs = psi_eval(g, dfam, pts);
                    if (lhs != rhs)
                        fail(t, ns,
                             "transplanted coboundary value " + rational_to_string(lhs) +
                                 " != cocycle value " + rational_to_string(rhs));
                    ++rep.checked;
                }
    }
    return rep;
}

}  // namespace gognorm
