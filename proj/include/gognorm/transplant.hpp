#pragma once

/*
 * Transplanting cochains between the global point set and the local vertex
 * sets.  The global set has one point (g, v) per group element and graph
 * vertex, plus one point per edge coset (realized as a midpoint address).
 * The local set of a vertex v has the elements of its vertex group, plus the
 * cosets of the edge-group images for every edge targeting v; it is
 * identified with the points projecting into the closed star of the tree
 * vertex 1.Gamma_v.
 *
 * The transplant of a family of local cochains evaluates, at the barycenter
 * of the projected tuple, the local cochain of the barycenter's site on the
 * retracted and translated tuple.  Restricting back to a vertex recovers the
 * original family exactly.
 *
 * Cochain evaluators must be pure: the harnesses may cache or reorder calls,
 * and reports are ordered canonically, so any hidden state would make runs
 * diverge.
 */

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "gognorm/errors.hpp"
#include "gognorm/tree.hpp"

namespace gognorm {

/*
 * Local points of a vertex.
 */

struct SvPoint {
    enum Kind { Element, Coset } kind = Element;
    GroupElt h;     // Element: member of the vertex group
    int edge = -1;  // Coset: edge with t(edge) = v ...
    GroupElt rep;   // ... and canonical representative of rep * im(h_edge)
    bool operator==(const SvPoint& o) const {
        if (kind != o.kind) return false;
        if (kind == Element) return h == o.h;
        return edge == o.edge && rep == o.rep;
    }
    bool operator!=(const SvPoint& o) const { return !(*this == o); }
};

inline SvPoint sv_element(const GroupElt& h) {
    SvPoint s;
    s.kind = SvPoint::Element;
    s.h = h;
    return s;
}

inline SvPoint sv_coset(const GraphOfGroups& g, int edge, const GroupElt& rep) {
    SvPoint s;
    s.kind = SvPoint::Coset;
    s.edge = edge;
    s.rep = g.image(edge).coset_rep(rep);
    return s;
}

// left action of a vertex-group element
inline SvPoint sv_act(const GraphOfGroups& g, int v, const GroupElt& h, const SvPoint& s) {
    if (s.kind == SvPoint::Element) return sv_element(ge_mul(g.spec(v), h, s.h));
    return sv_coset(g, s.edge, ge_mul(g.spec(v), h, s.rep));
}

inline int ge_cmp3(const GroupSpec& spec, const GroupElt& a, const GroupElt& b) {
    if (ge_less(spec, a, b)) return -1;
    return ge_less(spec, b, a) ? 1 : 0;
}

inline int sv_cmp(const GraphOfGroups& g, int v, const SvPoint& a, const SvPoint& b) {
    if (a.kind != b.kind) return a.kind == SvPoint::Element ? -1 : 1;
    if (a.kind == SvPoint::Element) return ge_cmp3(g.spec(v), a.h, b.h);
    if (a.edge != b.edge) return a.edge < b.edge ? -1 : 1;
    return ge_cmp3(g.spec(v), a.rep, b.rep);
}

inline int tp_cmp(const GraphOfGroups& g, const TPrimeVertex& a, const TPrimeVertex& b) {
    size_t da = tp_depth(a), db = tp_depth(b);
    if (da != db) return da < db ? -1 : 1;
    auto step_cmp = [&](const HalfStep& x, const HalfStep& y) {
        if (x.edge != y.edge) return x.edge < y.edge ? -1 : 1;
        return ge_cmp3(g.spec(g.origin(x.edge)), x.rep, y.rep);
    };
    if (a.vert.site != b.vert.site) return a.vert.site < b.vert.site ? -1 : 1;
    for (size_t i = 0; i < a.vert.steps.size(); ++i)
        if (int c = step_cmp(a.vert.steps[i], b.vert.steps[i])) return c;
    if (a.is_midpoint()) return step_cmp(*a.half, *b.half);
    return 0;
}

inline int sp_cmp(const GraphOfGroups& g, const SPoint& a, const SPoint& b) {
    if (a.kind != b.kind) return a.kind == SPoint::GroupVertex ? -1 : 1;
    if (a.kind == SPoint::GroupVertex) {
        if (a.v != b.v) return a.v < b.v ? -1 : 1;
        return nf_cmp(g, a.g, b.g);
    }
    return tp_cmp(g, a.mid, b.mid);
}

struct SvPointLess {
    const GraphOfGroups* g;
    int v;
    bool operator()(const SvPoint& a, const SvPoint& b) const { return sv_cmp(*g, v, a, b) < 0; }
};

struct SPointLess {
    const GraphOfGroups* g;
    bool operator()(const SPoint& a, const SPoint& b) const { return sp_cmp(*g, a, b) < 0; }
};

/*
 * The inclusion of the local set of v into the global set, and its partial
 * inverse on the closed star of the tree vertex 1.Gamma_v.  A local coset
 * (e, r) with t(e) = v becomes the midpoint adjacent to that tree vertex
 * across the geometric class of e: the trivial coset over the last tree-path
 * edge is the midpoint toward the base, everything else branches away.
 */

inline SPoint phi_point(const GraphOfGroups& g, int v, const SvPoint& s) {
    if (s.kind == SvPoint::Element) return spoint_group(nf_embed(g, v, s.h), v);
    if (g.target(s.edge) != v) throw VertexMismatchError("local coset edge does not target the vertex");
    TreeVertex w = tv_from_path(g, nf_tree_path(g, v));
    TPrimeVertex m;
    if (!w.steps.empty() && w.steps.back().edge == s.edge && ge_is_identity(s.rep)) {
        m.vert = w;
        m.vert.steps.pop_back();
        m.vert.site = g.origin(s.edge);
        m.half = w.steps.back();
    } else {
        m.vert = w;
        m.half = HalfStep{g.reverse(s.edge), s.rep};
    }
    return spoint_edge(m);
}

inline std::optional<SvPoint> to_local(const GraphOfGroups& g, int v, const SPoint& x) {
    TreeVertex w = tv_from_path(g, nf_tree_path(g, v));
    if (x.kind == SPoint::GroupVertex) {
        if (x.v != v || project_vertex(g, x.g, x.v) != w) return std::nullopt;
        return sv_element(*nf_vertex_member(g, x.g, v));
    }
    const TPrimeVertex& m = x.mid;
    if (m.vert == w)  // branching away from 1.Gamma_v
        return sv_coset(g, g.reverse(m.half->edge), m.half->rep);
    if (!w.steps.empty() && *m.half == w.steps.back()) {
        TreeVertex parent = w;
        parent.steps.pop_back();
        parent.site = g.origin(w.steps.back().edge);
        if (m.vert == parent) return sv_coset(g, w.steps.back().edge, ge_identity(g.spec(v)));
    }
    return std::nullopt;
}

// all local points of v whose element or representative has length <= bound
inline std::vector<SvPoint> enumerate_sv(const GraphOfGroups& g, int v, const Integer& bound) {
    std::vector<SvPoint> out;
    for (const GroupElt& h : ge_ball(g.spec(v), bound)) out.push_back(sv_element(h));
    for (size_t e = 0; e < g.ne(); ++e)
        if (g.target(static_cast<int>(e)) == v)
            for (const GroupElt& r : g.image(static_cast<int>(e)).coset_reps_within(bound))
                out.push_back(sv_coset(g, static_cast<int>(e), r));
    std::sort(out.begin(), out.end(), SvPointLess{&g, v});
    return out;
}

// global points generated by the loops of the given word bounds: every loop
// placed at every site, and every loop's edge coset in every geometric class
inline std::vector<SPoint> enumerate_spoints(const GraphOfGroups& g, int syllables,
                                             const Integer& expbound) {
    std::vector<NormalForm> loops = enumerate_elements(g, syllables, expbound);
    std::map<SPoint, bool, SPointLess> seen{SPointLess{&g}};
    for (const NormalForm& x : loops) {
        for (size_t v = 0; v < g.nv(); ++v)
            seen.emplace(spoint_group(x, static_cast<int>(v)), true);
        for (size_t e = 0; e < g.ne(); ++e)
            if (g.geom_min(static_cast<int>(e)) == static_cast<int>(e))
                seen.emplace(spoint_edge_coset(g, x, static_cast<int>(e)), true);
    }
    std::vector<SPoint> out;
    for (const auto& [p, _] : seen) out.push_back(p);
    return out;
}

/*
 * Cochains: lazy evaluators on (degree+1)-tuples with a declared sup bound.
 * The global set is infinite, so tables cannot be exhaustive; tabulated
 * cochains below give finite truncations for exhaustive harnesses.
 */

template <class P>
struct Cochain {
    int degree = 0;
    std::function<Rational(const std::vector<P>&)> eval;
    Rational bound = 0;
    bool alternating = false;
};

using SCochain = Cochain<SPoint>;
using VCochain = Cochain<SvPoint>;
using GCochain = Cochain<NormalForm>;  // on tuples of fundamental-group elements

// one local cochain per graph vertex, all of the same degree
using VertexFamily = std::vector<VCochain>;

// signed average over all permutations of the arguments
template <class P>
inline Cochain<P> alternate(const Cochain<P>& f) {
    Cochain<P> out;
    out.degree = f.degree;
    out.bound = f.bound;
    out.alternating = true;
    auto inner = f.eval;
    int n1 = f.degree + 1;
    out.eval = [inner, n1](const std::vector<P>& xs) -> Rational {
        std::vector<int> perm(n1);
        for (int i = 0; i < n1; ++i) perm[i] = i;
        Rational sum = 0;
        Integer count = 0;
        do {
            int inv = 0;
            for (int i = 0; i < n1; ++i)
                for (int j = i + 1; j < n1; ++j)
                    if (perm[i] > perm[j]) ++inv;
            int sgn = inv % 2 == 0 ? 1 : -1;
            if (faults::drop_alternation_sign) sgn = 1;  // deliberate fault
            std::vector<P> ys(n1);
            for (int i = 0; i < n1; ++i) ys[i] = xs[perm[i]];
            sum += sgn * inner(ys);
            ++count;
        } while (std::next_permutation(perm.begin(), perm.end()));
        return sum / Rational(count);
    };
    return out;
}

// simplicial coboundary: alternating sum over omitted coordinates
template <class P>
inline Cochain<P> coboundary(const Cochain<P>& f) {
    Cochain<P> out;
    out.degree = f.degree + 1;
    out.bound = Rational(f.degree + 2) * f.bound;
    out.alternating = f.alternating;
    auto inner = f.eval;
    int n2 = f.degree + 2;
    out.eval = [inner, n2](const std::vector<P>& xs) -> Rational {
        Rational sum = 0;
        for (int i = 0; i < n2; ++i) {
            std::vector<P> ys;
            ys.reserve(n2 - 1);
            for (int j = 0; j < n2; ++j)
                if (j != i) ys.push_back(xs[j]);
            sum += (i % 2 == 0 ? 1 : -1) * inner(ys);
        }
        return sum;
    };
    return out;
}

inline VertexFamily family_coboundary(const VertexFamily& fs) {
    VertexFamily out;
    for (const VCochain& f : fs) out.push_back(coboundary(f));
    return out;
}

/*
 * Finite alternating cochains: keys are stored sorted with the permutation
 * sign folded into the value, unlisted tuples evaluate to zero.
 */

template <class P, class Less>
struct TabulatedCochain {
    int degree = 0;
    Less less;
    std::map<std::vector<P>, Rational, std::function<bool(const std::vector<P>&, const std::vector<P>&)>>
        table;

    TabulatedCochain(int deg, Less l)
        : degree(deg),
          less(l),
          table([l](const std::vector<P>& a, const std::vector<P>& b) {
              return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), l);
          }) {}

    // sorts the key, tracking the permutation sign; repeated entries are
    // degenerate and cannot carry a nonzero value
    std::optional<std::pair<std::vector<P>, int>> canonical(const std::vector<P>& key) const {
        std::vector<P> k = key;
        int sgn = 1;
        for (size_t i = 1; i < k.size(); ++i)
            for (size_t j = i; j > 0 && !less(k[j - 1], k[j]); --j) {
                if (!less(k[j], k[j - 1])) return std::nullopt;  // equal points
                std::swap(k[j], k[j - 1]);
                sgn = -sgn;
            }
        return std::make_pair(std::move(k), sgn);
    }

    void set(const std::vector<P>& key, const Rational& value) {
        if (static_cast<int>(key.size()) != degree + 1)
            throw Error("tabulated cochain key of wrong length");
        auto canon = canonical(key);
        if (!canon) {
            if (value != 0) throw Error("repeated points cannot carry a nonzero value");
            return;
        }
        if (value == 0)
            table.erase(canon->first);
        else
            table[canon->first] = Rational(canon->second) * value;
    }

    Rational operator()(const std::vector<P>& key) const {
        auto canon = canonical(key);
        if (!canon) return 0;
        auto it = table.find(canon->first);
        if (it == table.end()) return 0;
        return Rational(canon->second) * it->second;
    }

    Cochain<P> as_cochain() const {
        Cochain<P> out;
        out.degree = degree;
        out.alternating = true;
        for (const auto& [_, val] : table) out.bound = std::max(out.bound, rational_abs(val));
        auto self = *this;
        out.eval = [self](const std::vector<P>& xs) { return self(xs); };
        return out;
    }
};

using TabulatedSv = TabulatedCochain<SvPoint, SvPointLess>;
using TabulatedS = TabulatedCochain<SPoint, SPointLess>;

/*
 * The transplant.  A single term evaluates the local cochain of a tree
 * vertex's site on the tuple retracted to that vertex's star and translated
 * back by the least representative; the full map keeps the barycenter term,
 * the only one that can survive for alternating families.
 */

inline void check_family(const GraphOfGroups& g, const VertexFamily& fs, int degree) {
    if (fs.size() != g.nv()) throw GraphMismatchError("family needs one cochain per vertex");
    for (const VCochain& f : fs)
        if (f.degree != degree) throw Error("family members must share the tuple degree");
}

inline Rational psi_term(const GraphOfGroups& g, const VertexFamily& fs, const TreeVertex& w,
                         const std::vector<SPoint>& xs) {
    NormalForm sinv = nf_inv(g, sigma_vertex(g, w));
    std::vector<SvPoint> locs;
    locs.reserve(xs.size());
    for (const SPoint& x : xs) {
        SPoint q = sp_translate(g, sinv, retract(g, w, x));
        std::optional<SvPoint> loc = to_local(g, w.site, q);
        if (!loc) throw Error("retracted point escaped the local star");
        locs.push_back(*loc);
    }
    return fs[w.site].eval(locs);
}

inline Rational psi_eval(const GraphOfGroups& g, const VertexFamily& fs,
                         const std::vector<SPoint>& xs) {
    if (xs.size() < 3) throw DegreeTooLowError("transplant needs tuples of length at least 3");
    check_family(g, fs, static_cast<int>(xs.size()) - 1);
    std::vector<TPrimeVertex> ys;
    ys.reserve(xs.size());
    for (const SPoint& x : xs) ys.push_back(sp_project(g, x));
    std::optional<TreeVertex> w = barycenter(g, ys);
    if (!w) return 0;
    return psi_term(g, fs, *w, xs);
}

inline SCochain psi_as_cochain(const GraphOfGroups& g, const VertexFamily& fs) {
    if (fs.empty()) throw GraphMismatchError("family needs one cochain per vertex");
    int degree = fs[0].degree;
    if (degree < 2) throw DegreeTooLowError("transplant needs tuples of length at least 3");
    check_family(g, fs, degree);
    SCochain out;
    out.degree = degree;
    out.alternating = true;
    for (const VCochain& f : fs) {
        out.bound = std::max(out.bound, f.bound);
        out.alternating = out.alternating && f.alternating;
    }
    const GraphOfGroups* gp = &g;
    out.eval = [gp, fs](const std::vector<SPoint>& xs) { return psi_eval(*gp, fs, xs); };
    return out;
}

// restriction of a global cochain to the local points of a vertex
inline VCochain phi_pullback(const GraphOfGroups& g, int v, const SCochain& f) {
    VCochain out;
    out.degree = f.degree;
    out.bound = f.bound;
    out.alternating = f.alternating;
    const GraphOfGroups* gp = &g;
    auto inner = f.eval;
    out.eval = [gp, v, inner](const std::vector<SvPoint>& ss) {
        std::vector<SPoint> xs;
        xs.reserve(ss.size());
        for (const SvPoint& s : ss) xs.push_back(phi_point(*gp, v, s));
        return inner(xs);
    };
    return out;
}

/*
 * When every edge group is trivial, each edge coset is a single group
 * element, so forgetting sites and cosets down to group elements is defined
 * and pulls cochains on group tuples back to global cochains.
 */

inline NormalForm sp_group_coordinate(const GraphOfGroups& g, const SPoint& x) {
    if (x.kind == SPoint::GroupVertex) return x.g;
    return sigma_midpoint(g, x.mid);  // the unique member of the coset
}

inline SCochain mu_free_pullback(const GraphOfGroups& g, const GCochain& f) {
    for (size_t e = 0; e < g.ne(); ++e)
        if (!g.edge_spec(static_cast<int>(e)).generators.empty())
            throw NotFreeProductError("group coordinates need trivial edge groups");
    SCochain out;
    out.degree = f.degree;
    out.bound = f.bound;
    out.alternating = f.alternating;
    const GraphOfGroups* gp = &g;
    auto inner = f.eval;
    out.eval = [gp, inner](const std::vector<SPoint>& xs) {
        std::vector<NormalForm> gs;
        gs.reserve(xs.size());
        for (const SPoint& x : xs) gs.push_back(sp_group_coordinate(*gp, x));
        return inner(gs);
    };
    return out;
}

/*
 * Harnesses.
 */

struct ChainMapCounterexample {
    std::vector<SPoint> tuple;
    Rational lhs;  // coboundary of the transplant
    Rational rhs;  // transplant of the coboundaries
};

struct ChainMapReport {
    size_t checked = 0;
    std::vector<ChainMapCounterexample> counterexamples;
    bool ok() const { return counterexamples.empty(); }
};

// checks coboundary(psi f) == psi(coboundary f) on (degree+2)-tuples drawn
// from the pool: every tuple when samples == 0, else seeded draws
inline ChainMapReport verify_chain_map(const GraphOfGroups& g, const VertexFamily& fs,
                                       const std::vector<SPoint>& pool, size_t samples = 0,
                                       uint64_t seed = 0) {
    if (fs.empty() || fs[0].degree < 2)
        throw DegreeTooLowError("transplant needs tuples of length at least 3");
    int n = fs[0].degree;
    check_family(g, fs, n);
    SCochain lhs = coboundary(psi_as_cochain(g, fs));
    SCochain rhs = psi_as_cochain(g, family_coboundary(fs));
    ChainMapReport report;
    size_t len = static_cast<size_t>(n) + 2;
    auto check = [&](const std::vector<SPoint>& tuple) {
        Rational a = lhs.eval(tuple), b = rhs.eval(tuple);
        ++report.checked;
        if (a != b) report.counterexamples.push_back({tuple, a, b});
    };
    if (samples == 0) {
        std::vector<size_t> idx(len, 0);
        std::vector<SPoint> tuple(len, pool.at(0));
        while (true) {
            for (size_t i = 0; i < len; ++i) tuple[i] = pool[idx[i]];
            check(tuple);
            size_t i = 0;
            while (i < len && ++idx[i] == pool.size()) idx[i++] = 0;
            if (i == len) break;
        }
    } else {
        std::mt19937_64 rng(seed);
        std::vector<SPoint> tuple;
        for (size_t s = 0; s < samples; ++s) {
            tuple.clear();
            for (size_t i = 0; i < len; ++i)
                tuple.push_back(pool[static_cast<size_t>(rng() % pool.size())]);
            check(tuple);
        }
    }
    std::sort(report.counterexamples.begin(), report.counterexamples.end(),
              [&](const ChainMapCounterexample& a, const ChainMapCounterexample& b) {
                  return std::lexicographical_compare(a.tuple.begin(), a.tuple.end(),
                                                      b.tuple.begin(), b.tuple.end(),
                                                      SPointLess{&g});
              });
    return report;
}

struct RetractionCounterexample {
    int vertex = -1;
    std::vector<SvPoint> tuple;
    Rational expected;  // the family value
    Rational actual;    // the value after transplanting and restricting
};

// checks that restricting the transplant recovers the family on every local
// tuple drawn from pts[v]
inline std::vector<RetractionCounterexample> verify_retraction(
    const GraphOfGroups& g, const VertexFamily& fs,
    const std::vector<std::vector<SvPoint>>& pts) {
    if (fs.empty() || fs[0].degree < 2)
        throw DegreeTooLowError("transplant needs tuples of length at least 3");
    int n = fs[0].degree;
    check_family(g, fs, n);
    SCochain psif = psi_as_cochain(g, fs);
    std::vector<RetractionCounterexample> out;
    size_t len = static_cast<size_t>(n) + 1;
    for (size_t v = 0; v < g.nv(); ++v) {
        VCochain back = phi_pullback(g, static_cast<int>(v), psif);
        const std::vector<SvPoint>& pool = pts.at(v);
        std::vector<size_t> idx(len, 0);
        std::vector<SvPoint> tuple(len, pool.at(0));
        while (true) {
            for (size_t i = 0; i < len; ++i) tuple[i] = pool[idx[i]];
            Rational want = fs[v].eval(tuple), got = back.eval(tuple);
            if (want != got)
                out.push_back({static_cast<int>(v), tuple, want, got});
            size_t i = 0;
            while (i < len && ++idx[i] == pool.size()) idx[i++] = 0;
            if (i == len) break;
        }
    }
    return out;
}

/*
 * Point literals for reports and tabulated-cochain files.
 */

inline ordered_json nf_to_letters_json(const GraphOfGroups& g, const NormalForm& x) {
    ordered_json out = ordered_json::array();
    for (size_t i = 0; i < x.elts.size(); ++i) {
        int site = nf_site(g, x, i);
        for (const auto& l : word_to_json(g.spec(site), x.elts[i])) out.push_back(l);
        if (i < x.eds.size()) out.push_back({g.edges[x.eds[i]].name, 1});
    }
    return out;
}

inline ordered_json sp_to_json(const GraphOfGroups& g, const SPoint& x) {
    ordered_json out;
    if (x.kind == SPoint::GroupVertex) {
        out["kind"] = "group";
        out["word"] = nf_to_letters_json(g, x.g);
        out["vertex"] = g.vertices[x.v].name;
    } else {
        out["kind"] = "edge";
        int c = g.geom_min(x.mid.half->edge);
        out["word"] = nf_to_letters_json(g, sigma_midpoint(g, x.mid));
        out["edge"] = g.edges[c].name;
    }
    return out;
}

inline SPoint sp_from_json(const GraphOfGroups& g, const ordered_json& j) {
    std::vector<std::pair<std::string, Integer>> letters;
    for (const auto& l : j.at("word"))
        letters.emplace_back(l.at(0).get<std::string>(), Integer(l.at(1).get<long long>()));
    NormalForm x = normal_form(g, letters);
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "group") return spoint_group(x, g.vertex_index(j.at("vertex").get<std::string>()));
    if (kind != "edge") throw ParseError("point kind must be group or edge");
    return spoint_edge_coset(g, x, g.edge_index(j.at("edge").get<std::string>()));
}

inline ordered_json sv_to_json(const GraphOfGroups& g, int v, const SvPoint& s) {
    ordered_json out;
    if (s.kind == SvPoint::Element) {
        out["kind"] = "element";
        out["word"] = word_to_json(g.spec(v), s.h);
    } else {
        out["kind"] = "coset";
        out["edge"] = g.edges[s.edge].name;
        out["rep"] = word_to_json(g.spec(v), s.rep);
    }
    return out;
}

inline SvPoint sv_from_json(const GraphOfGroups& g, int v, const ordered_json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "element") return sv_element(word_in_group(g.spec(v), j.at("word")));
    if (kind != "coset") throw ParseError("local point kind must be element or coset");
    int e = g.edge_index(j.at("edge").get<std::string>());
    if (g.target(e) != v) throw VertexMismatchError("local coset edge does not target the vertex");
    return sv_coset(g, e, word_in_group(g.spec(v), j.at("rep")));
}

}  // namespace gognorm
