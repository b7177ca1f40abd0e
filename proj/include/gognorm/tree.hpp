#pragma once

/*
 * The tree acted on by the fundamental group, together with its barycentric
 * subdivision.  A vertex is addressed by its geodesic from the base vertex:
 * a list of half steps (edge crossed, shortlex-least coset representative at
 * the crossing).  Midpoints of edges are addressed by their nearer endpoint
 * plus one more half step.  Addresses are unique, so structural equality is
 * tree equality, and geodesics and distances reduce to prefix comparisons.
 *
 * Also here: the points the retraction acts on (group-translated vertex
 * sites and edge-midpoint cosets), translation by group elements, geodesics,
 * barycenters of tuples, and the projection-to-star retraction.
 */

#include <optional>
#include <vector>

#include "gognorm/faults.hpp"
#include "gognorm/normal_form.hpp"

namespace gognorm {

struct HalfStep {
    int edge = -1;
    GroupElt rep;  // shortlex-least representative of rep * im(h_{reverse(edge)})
    bool operator==(const HalfStep& o) const { return edge == o.edge && rep == o.rep; }
    bool operator!=(const HalfStep& o) const { return !(*this == o); }
};

struct TreeVertex {
    int site = -1;  // vertex of the underlying graph
    std::vector<HalfStep> steps;
    bool operator==(const TreeVertex& o) const { return site == o.site && steps == o.steps; }
    bool operator!=(const TreeVertex& o) const { return !(*this == o); }
};

struct TPrimeVertex {
    TreeVertex vert;               // the vertex, or the nearer endpoint
    std::optional<HalfStep> half;  // set: midpoint of the edge crossed by half
    bool is_midpoint() const { return half.has_value(); }
    bool operator==(const TPrimeVertex& o) const { return vert == o.vert && half == o.half; }
    bool operator!=(const TPrimeVertex& o) const { return !(*this == o); }
};

inline TreeVertex tree_base(const GraphOfGroups& g) {
    TreeVertex t;
    t.site = g.base;
    return t;
}

inline TPrimeVertex as_tprime(const TreeVertex& v) {
    TPrimeVertex t;
    t.vert = v;
    return t;
}

// Path word base -> site realizing the address: [rep_1, e_1, ..., rep_k, e_k, 1].
inline NormalForm tv_path_word(const GraphOfGroups& g, const TreeVertex& v) {
    NFBuilder bld(g, g.base);
    for (const HalfStep& h : v.steps) {
        bld.push_elt(h.rep);
        bld.push_edge(h.edge);
    }
    return bld.finish();
}

// Address of the coset determined by a path word base -> v (drop the final
// free syllable; the canonical transversal syllables are the step reps).
inline TreeVertex tv_from_path(const GraphOfGroups& g, const NormalForm& path) {
    TreeVertex t;
    t.site = path.end;
    for (size_t i = 0; i < path.eds.size(); ++i)
        t.steps.push_back({path.eds[i], path.elts[i]});
    return t;
}

// The vertex x Gamma_v of the tree, for a loop x at the base vertex.
inline TreeVertex project_vertex(const GraphOfGroups& g, const NormalForm& x, int v) {
    NFBuilder bld(g, g.base);
    bld.push_nf(x);
    bld.push_nf(nf_tree_path(g, v));
    return tv_from_path(g, bld.finish());
}

// A loop representing the coset of a tree vertex: path word * tau_site^-1.
inline NormalForm tv_rep_candidate(const GraphOfGroups& g, const TreeVertex& v) {
    return nf_mul(g, tv_path_word(g, v), nf_inv(g, nf_tree_path(g, v.site)));
}

// Midpoint of the edge between two adjacent tree vertices.
inline TPrimeVertex midpoint_between(const GraphOfGroups& g, const TreeVertex& a,
                                     const TreeVertex& b) {
    const TreeVertex& near = a.steps.size() <= b.steps.size() ? a : b;
    const TreeVertex& far = a.steps.size() <= b.steps.size() ? b : a;
    if (far.steps.size() != near.steps.size() + 1 ||
        !std::equal(near.steps.begin(), near.steps.end(), far.steps.begin()))
        throw Error("midpoint of non-adjacent tree vertices");
    TPrimeVertex m;
    m.vert = near;
    m.half = far.steps.back();
    return m;
}

inline TreeVertex tv_extend(const GraphOfGroups& g, const TreeVertex& v, const HalfStep& h) {
    TreeVertex t = v;
    t.steps.push_back(h);
    t.site = g.target(h.edge);
    return t;
}

// The two endpoints of a midpoint's edge: (nearer, farther).
inline std::pair<TreeVertex, TreeVertex> midpoint_ends(const GraphOfGroups& g,
                                                       const TPrimeVertex& m) {
    return {m.vert, tv_extend(g, m.vert, *m.half)};
}

inline size_t tp_depth(const TPrimeVertex& t) {
    return 2 * t.vert.steps.size() + (t.is_midpoint() ? 1 : 0);
}

// Chain of subdivision points base -> t along the tree, t included.
inline std::vector<TPrimeVertex> tp_chain(const GraphOfGroups& g, const TPrimeVertex& t) {
    std::vector<TPrimeVertex> out;
    TreeVertex cur = tree_base(g);
    out.push_back(as_tprime(cur));
    for (const HalfStep& h : t.vert.steps) {
        TPrimeVertex m;
        m.vert = cur;
        m.half = h;
        out.push_back(m);
        cur = tv_extend(g, cur, h);
        out.push_back(as_tprime(cur));
    }
    if (t.is_midpoint()) {
        TPrimeVertex m;
        m.vert = cur;
        m.half = *t.half;
        out.push_back(m);
    }
    return out;
}

// Geodesic a -> b in the subdivided tree, endpoints included.
inline std::vector<TPrimeVertex> tp_geodesic(const GraphOfGroups& g, const TPrimeVertex& a,
                                             const TPrimeVertex& b) {
    std::vector<TPrimeVertex> ca = tp_chain(g, a), cb = tp_chain(g, b);
    size_t c = 0;
    while (c < ca.size() && c < cb.size() && ca[c] == cb[c]) ++c;
    std::vector<TPrimeVertex> out;
    for (size_t i = ca.size(); i-- > c;) out.push_back(ca[i]);
    out.push_back(ca[c - 1]);  // last common point (c >= 1: chains share the base)
    for (size_t i = c; i < cb.size(); ++i) out.push_back(cb[i]);
    return out;
}

inline size_t tp_distance(const GraphOfGroups& g, const TPrimeVertex& a, const TPrimeVertex& b) {
    std::vector<TPrimeVertex> ca = tp_chain(g, a), cb = tp_chain(g, b);
    size_t c = 0;
    while (c < ca.size() && c < cb.size() && ca[c] == cb[c]) ++c;
    return (ca.size() - c) + (cb.size() - c);
}

/*
 * Translation action on addresses.
 */

inline TreeVertex translate_vertex(const GraphOfGroups& g, const NormalForm& x,
                                   const TreeVertex& v) {
    NFBuilder bld(g, g.base);
    bld.push_nf(x);
    bld.push_nf(tv_path_word(g, v));
    return tv_from_path(g, bld.finish());
}

inline TPrimeVertex translate_tprime(const GraphOfGroups& g, const NormalForm& x,
                                     const TPrimeVertex& t) {
    if (!t.is_midpoint()) return as_tprime(translate_vertex(g, x, t.vert));
    auto [near, far] = midpoint_ends(g, t);
    return midpoint_between(g, translate_vertex(g, x, near), translate_vertex(g, x, far));
}

/*
 * Points acted on: a group element sitting at a vertex site, or an edge
 * midpoint.  The group element of a vertex point is part of the data (the
 * evaluation of vertex cochains needs it); projection to the tree forgets it
 * to the coset.
 */

struct SPoint {
    enum Kind { GroupVertex, EdgeCoset } kind = GroupVertex;
    NormalForm g;       // GroupVertex: loop at the base vertex
    int v = -1;         // GroupVertex: site
    TPrimeVertex mid;   // EdgeCoset: the midpoint
    bool operator==(const SPoint& o) const {
        if (kind != o.kind) return false;
        if (kind == GroupVertex) return v == o.v && g == o.g;
        return mid == o.mid;
    }
    bool operator!=(const SPoint& o) const { return !(*this == o); }
};

inline SPoint spoint_group(const NormalForm& x, int v) {
    SPoint p;
    p.kind = SPoint::GroupVertex;
    p.g = x;
    p.v = v;
    return p;
}

inline SPoint spoint_edge(const TPrimeVertex& m) {
    SPoint p;
    p.kind = SPoint::EdgeCoset;
    p.mid = m;
    return p;
}

// Base midpoint of a geometric edge class (canonical orientation = lower
// declared index): the edge between 1 Gamma_{t(c)} and its translate across
// the reversed edge.
inline TPrimeVertex base_midpoint(const GraphOfGroups& g, int geom_edge) {
    int c = g.geom_min(geom_edge);
    TreeVertex a = project_vertex(g, nf_identity(g, g.base), g.target(c));
    TreeVertex b = project_vertex(g, nf_edge_loop(g, g.reverse(c)), g.origin(c));
    return midpoint_between(g, a, b);
}

// The midpoint x . base_midpoint(e), i.e. the edge coset x (Gamma_e embedded).
inline SPoint spoint_edge_coset(const GraphOfGroups& g, const NormalForm& x, int geom_edge) {
    return spoint_edge(translate_tprime(g, x, base_midpoint(g, geom_edge)));
}

inline TPrimeVertex sp_project(const GraphOfGroups& g, const SPoint& p) {
    if (p.kind == SPoint::EdgeCoset) return p.mid;
    return as_tprime(project_vertex(g, p.g, p.v));
}

inline SPoint sp_translate(const GraphOfGroups& g, const NormalForm& x, const SPoint& p) {
    if (p.kind == SPoint::GroupVertex) return spoint_group(nf_mul(g, x, p.g), p.v);
    return spoint_edge(translate_tprime(g, x, p.mid));
}

/*
 * Barycenters.  A subdivision vertex c is the barycenter of a tuple when
 * every pair of coordinates not equal to c is separated by c (lies in two
 * different components of the complement).  At most one such c can exist for
 * tuples of length >= 3; candidates live on the pairwise geodesics.
 */

inline std::vector<TreeVertex> barycenter_all(const GraphOfGroups& g,
                                              const std::vector<TPrimeVertex>& ys) {
    if (ys.size() < 3) throw Error("barycenter needs a tuple of length >= 3");
    std::vector<TreeVertex> cands;
    auto add = [&](const TPrimeVertex& t) {
        if (t.is_midpoint()) return;
        for (const TreeVertex& c : cands)
            if (c == t.vert) return;
        cands.push_back(t.vert);
    };
    for (size_t i = 0; i < ys.size(); ++i)
        for (size_t j = i + 1; j < ys.size(); ++j)
            for (const TPrimeVertex& t : tp_geodesic(g, ys[i], ys[j])) add(t);
    std::vector<TreeVertex> out;
    for (const TreeVertex& c : cands) {
        TPrimeVertex ct = as_tprime(c);
        bool ok = true, stop = false;
        for (size_t i = 0; i < ys.size() && ok && !stop; ++i)
            for (size_t j = i + 1; j < ys.size() && ok && !stop; ++j) {
                // deliberate fault: verify against the first pair only
                if (faults::barycenter_candidates && !(i == 0 && j == 1)) {
                    stop = true;
                    break;
                }
                if (ys[i] == ct || ys[j] == ct) continue;
                size_t dij = tp_distance(g, ys[i], ys[j]);
                size_t dic = tp_distance(g, ys[i], ct);
                size_t dcj = tp_distance(g, ct, ys[j]);
                if (dic + dcj != dij) ok = false;  // covers y_i == y_j != c as well
            }
        if (ok) out.push_back(c);
    }
    return out;
}

inline std::optional<TreeVertex> barycenter(const GraphOfGroups& g,
                                            const std::vector<TPrimeVertex>& ys) {
    std::vector<TreeVertex> all = barycenter_all(g, ys);
    if (all.empty()) return std::nullopt;
    if (all.size() > 1) throw Error("ambiguous barycenter");
    return all[0];
}

/*
 * Retraction toward the closed star of a tree vertex w: points of the star
 * stay put, any other point maps to the first midpoint on the geodesic from
 * w toward it.
 */

inline SPoint retract(const GraphOfGroups& g, const TreeVertex& w, const SPoint& x) {
    TPrimeVertex px = sp_project(g, x);
    TPrimeVertex wt = as_tprime(w);
    if (tp_distance(g, wt, px) <= 1) return x;
    std::vector<TPrimeVertex> geo = tp_geodesic(g, wt, px);
    return spoint_edge(geo[1]);
}

/*
 * Shortlex-least coset representatives of tree vertices and midpoints: the
 * smallest group element translating the corresponding base object there.
 */

inline NormalForm sigma_vertex(const GraphOfGroups& g, const TreeVertex& w) {
    NormalForm pw = tv_path_word(g, w);
    NormalForm tau = nf_tree_path(g, w.site);
    NormalForm cand = nf_mul(g, pw, nf_inv(g, tau));
    Integer bound = nf_len(g, pw) + nf_len(g, cand) + nf_len(g, tau);
    NormalForm best = cand;
    for (const GroupElt& y : ge_ball(g.spec(w.site), bound)) {
        NFBuilder bld(g, g.base);
        bld.push_nf(pw);
        bld.push_elt(y);
        bld.push_nf(nf_inv(g, tau));
        NormalForm x = bld.finish();
        if (nf_less(g, x, best)) best = x;
    }
    return best;
}

inline NormalForm sigma_midpoint(const GraphOfGroups& g, const TPrimeVertex& m) {
    if (!m.is_midpoint()) return sigma_vertex(g, m.vert);
    // constructive translate: path to the nearer end, the half-step rep, the
    // crossing letter, back along the tree
    int f = m.half->edge;
    int c = g.geom_min(f);
    NFBuilder bld(g, g.base);
    bld.push_nf(tv_path_word(g, m.vert));
    bld.push_elt(m.half->rep);
    bld.push_edge(f);
    bld.push_nf(nf_inv(g, nf_tree_path(g, g.target(f))));
    NormalForm x0 = bld.finish();
    // crossing against the canonical orientation lands on the base midpoint
    // only after undoing the crossing loop
    if (translate_tprime(g, x0, base_midpoint(g, c)) != m) {
        NormalForm omega = nf_edge_loop(g, g.reverse(c));
        NormalForm alt = nf_mul(g, x0, nf_inv(g, omega));
        if (translate_tprime(g, alt, base_midpoint(g, c)) != m)
            throw Error("midpoint representative construction failed");
        x0 = alt;
    }
    // refine over the stabilizer: x0 * (embedded edge group elements)
    NormalForm best = x0;
    Integer bound = 2 * nf_len(g, x0) + 2 * nf_len(g, nf_tree_path(g, g.target(c)));
    const SubgroupImage& im = g.image(c);
    for (const GroupElt& q : ge_ball(g.spec(g.target(c)), bound)) {
        if (!im.contains(q)) continue;
        NormalForm x = nf_mul(g, x0, nf_embed(g, g.target(c), q));
        if (nf_less(g, x, best)) best = x;
    }
    return best;
}

inline NormalForm sigma(const GraphOfGroups& g, const TPrimeVertex& t) {
    return t.is_midpoint() ? sigma_midpoint(g, t) : sigma_vertex(g, t.vert);
}

/*
 * Bounded enumeration of tree vertices: all addresses whose step
 * representatives have word length at most `replen`, up to tree radius
 * `radius` from the base.
 */

inline std::vector<TreeVertex> tree_ball(const GraphOfGroups& g, size_t radius,
                                         const Integer& replen) {
    std::vector<TreeVertex> out;
    std::vector<TreeVertex> frontier{tree_base(g)};
    out.push_back(tree_base(g));
    for (size_t r = 0; r < radius; ++r) {
        std::vector<TreeVertex> next;
        for (const TreeVertex& v : frontier) {
            for (size_t f = 0; f < g.ne(); ++f) {
                int fe = static_cast<int>(f);
                if (g.origin(fe) != v.site) continue;
                const SubgroupImage& sub = g.image(g.reverse(fe));
                for (const GroupElt& rep : sub.coset_reps_within(replen)) {
                    if (!v.steps.empty() && fe == g.reverse(v.steps.back().edge) &&
                        ge_is_identity(rep))
                        continue;  // backtracks onto the previous edge
                    next.push_back(tv_extend(g, v, {fe, rep}));
                }
            }
        }
        out.insert(out.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    return out;
}

}  // namespace gognorm
