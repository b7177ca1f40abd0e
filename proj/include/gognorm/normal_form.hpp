#pragma once

/*
 * Normal forms for the fundamental group(oid) of a graph of groups.  A
 * NormalForm is a reduced path word
 *     [g_0, e_1, g_1, ..., e_k, g_k]
 * based at `start`, with g_i in the group at the i-th vertex of the edge path
 * and e_i directed edges.  Loops at the base vertex are group elements; paths
 * with other endpoints serve the coset machinery.
 *
 * Invariants of a canonical NormalForm:
 *   - no subword (e, g, reverse(e)) with g in the image of the monomorphism
 *     over e (pinch-free);
 *   - every g_i except the last is the shortlex-least representative of its
 *     coset modulo the image of the monomorphism over reverse(e_{i+1});
 *     surplus has been pushed rightward through the edge letters.
 * Two words are equal in the fundamental group iff their canonical forms are
 * structurally equal.
 */

#include <map>
#include <string>
#include <vector>

#include "gognorm/graph_of_groups.hpp"

namespace gognorm {

struct NormalForm {
    int start = -1, end = -1;
    std::vector<GroupElt> elts;  // always eds.size() + 1 entries
    std::vector<int> eds;

    bool operator==(const NormalForm& o) const {
        return start == o.start && end == o.end && elts == o.elts && eds == o.eds;
    }
    bool operator!=(const NormalForm& o) const { return !(*this == o); }
};

inline int nf_site(const GraphOfGroups& g, const NormalForm& nf, size_t i) {
    return i == 0 ? nf.start : g.target(nf.eds[i - 1]);
}

inline NormalForm nf_identity(const GraphOfGroups& g, int v) {
    NormalForm nf;
    nf.start = nf.end = v;
    nf.elts.push_back(ge_identity(g.spec(v)));
    return nf;
}

// Incremental pinch-free assembly of a path word.
class NFBuilder {
public:
    NFBuilder(const GraphOfGroups& g, int start) : g_(g) {
        nf_.start = nf_.end = start;
        nf_.elts.push_back(ge_identity(g.spec(start)));
    }

    void push_elt(const GroupElt& h) {
        nf_.elts.back() = ge_mul(g_.spec(nf_.end), nf_.elts.back(), h);
    }

    void push_edge(int f) {
        if (g_.origin(f) != nf_.end)
            throw VertexMismatchError("edge does not continue the path: " + g_.edges[f].name);
        if (!nf_.eds.empty() && nf_.eds.back() == g_.reverse(f) &&
            g_.image(nf_.eds.back()).contains(nf_.elts.back())) {
            // (e, h_e(z), reverse(e)) pinches to h_{reverse(e)}(z)
            int e = nf_.eds.back();
            IVec z = g_.image(e).preimage(nf_.elts.back());
            GroupElt rep = g_.image(f).image_of(z);
            nf_.eds.pop_back();
            nf_.elts.pop_back();
            nf_.end = g_.target(f);
            nf_.elts.back() = ge_mul(g_.spec(nf_.end), nf_.elts.back(), rep);
        } else {
            nf_.eds.push_back(f);
            nf_.end = g_.target(f);
            nf_.elts.push_back(ge_identity(g_.spec(nf_.end)));
        }
    }

    void push_nf(const NormalForm& other) {
        if (other.start != nf_.end) throw VertexMismatchError("path endpoints do not meet");
        push_elt(other.elts[0]);
        for (size_t i = 0; i < other.eds.size(); ++i) {
            push_edge(other.eds[i]);
            push_elt(other.elts[i + 1]);
        }
    }

    // Replace every g_i but the last by its shortlex-least transversal
    // representative, pushing the surplus through the next edge letter.
    NormalForm finish() {
        for (size_t i = 0; i + 1 < nf_.elts.size(); ++i) {
            int enx = nf_.eds[i];
            const SubgroupImage& sub = g_.image(g_.reverse(enx));
            const GroupSpec& spec = g_.spec(nf_site(g_, nf_, i));
            GroupElt sigma = sub.coset_rep(nf_.elts[i]);
            if (sigma != nf_.elts[i]) {
                IVec z = sub.preimage(ge_mul(spec, ge_inv(spec, sigma), nf_.elts[i]));
                GroupElt carried = g_.image(enx).image_of(z);
                nf_.elts[i] = sigma;
                const GroupSpec& nspec = g_.spec(nf_site(g_, nf_, i + 1));
                nf_.elts[i + 1] = ge_mul(nspec, carried, nf_.elts[i + 1]);
            }
        }
        return nf_;
    }

private:
    const GraphOfGroups& g_;
    NormalForm nf_;
};

inline NormalForm nf_mul(const GraphOfGroups& g, const NormalForm& a, const NormalForm& b) {
    NFBuilder bld(g, a.start);
    bld.push_nf(a);
    bld.push_nf(b);
    return bld.finish();
}

inline NormalForm nf_inv(const GraphOfGroups& g, const NormalForm& a) {
    NFBuilder bld(g, a.end);
    bld.push_elt(ge_inv(g.spec(a.end), a.elts.back()));
    for (size_t i = a.eds.size(); i-- > 0;) {
        bld.push_edge(g.reverse(a.eds[i]));
        bld.push_elt(ge_inv(g.spec(nf_site(g, a, i)), a.elts[i]));
    }
    return bld.finish();
}

inline bool nf_is_identity(const NormalForm& a) {
    return a.eds.empty() && ge_is_identity(a.elts[0]);
}

// Path base -> v along the spanning tree, all syllables trivial.
inline NormalForm nf_tree_path(const GraphOfGroups& g, int v) {
    NFBuilder bld(g, g.base);
    for (int e : g.tree_path(v)) bld.push_edge(e);
    return bld.finish();
}

// The loop tau_v h tau_v^-1 embedding the group at v into the fundamental
// group at the base vertex.
inline NormalForm nf_embed(const GraphOfGroups& g, int v, const GroupElt& h) {
    NFBuilder bld(g, g.base);
    for (int e : g.tree_path(v)) bld.push_edge(e);
    bld.push_elt(h);
    const auto& path = g.tree_path(v);
    for (size_t i = path.size(); i-- > 0;) bld.push_edge(g.reverse(path[i]));
    return bld.finish();
}

// The loop tau_{o(e)} t_e tau_{t(e)}^-1 for a directed edge e.
inline NormalForm nf_edge_loop(const GraphOfGroups& g, int e) {
    NFBuilder bld(g, g.base);
    for (int f : g.tree_path(g.origin(e))) bld.push_edge(f);
    bld.push_edge(e);
    const auto& path = g.tree_path(g.target(e));
    for (size_t i = path.size(); i-- > 0;) bld.push_edge(g.reverse(path[i]));
    return bld.finish();
}

// Fold a flat input word (letters name^exp, vertex generators and edge
// letters freely mixed) into a canonical loop at the base vertex.
inline NormalForm normal_form(const GraphOfGroups& g,
                              const std::vector<std::pair<std::string, Integer>>& letters) {
    NormalForm acc = nf_identity(g, g.base);
    for (const auto& [name, exp] : letters) {
        Symbol sym = g.resolve(name);
        if (sym.kind == Symbol::VertexGen) {
            GroupElt h = ge_from_letters(g.spec(sym.vertex), {{sym.index, exp}});
            acc = nf_mul(g, acc, nf_embed(g, sym.vertex, h));
        } else {
            NormalForm loop = exp >= 0 ? nf_edge_loop(g, sym.edge)
                                       : nf_inv(g, nf_edge_loop(g, sym.edge));
            Integer n = exp >= 0 ? exp : -exp;
            for (Integer i = 0; i < n; ++i) acc = nf_mul(g, acc, loop);
        }
    }
    return acc;
}

inline Integer nf_len(const GraphOfGroups& g, const NormalForm& a) {
    Integer n(a.eds.size());
    for (size_t i = 0; i < a.elts.size(); ++i)
        n += ge_len(g.spec(nf_site(g, a, i)), a.elts[i]);
    return n;
}

// Shortlex: start vertex, then total length, then position by position (group
// elements per-group shortlex, edge letters by declaration index).
inline int nf_cmp(const GraphOfGroups& g, const NormalForm& a, const NormalForm& b) {
    if (a.start != b.start) return a.start < b.start ? -1 : 1;
    Integer la = nf_len(g, a), lb = nf_len(g, b);
    if (la != lb) return la < lb ? -1 : 1;
    size_t n = std::min(a.elts.size(), b.elts.size());
    for (size_t i = 0; i < n; ++i) {
        const GroupSpec& spec = g.spec(nf_site(g, a, i));
        if (a.elts[i] != b.elts[i]) {
            Integer ga = ge_len(spec, a.elts[i]), gb = ge_len(spec, b.elts[i]);
            if (ga != gb) return ga < gb ? -1 : 1;
            int c = runs_lex_cmp(ge_runs(spec, a.elts[i]), ge_runs(spec, b.elts[i]));
            if (c != 0) return c;
        }
        if (i < a.eds.size() && i < b.eds.size() && a.eds[i] != b.eds[i])
            return a.eds[i] < b.eds[i] ? -1 : 1;
    }
    if (a.eds.size() != b.eds.size()) return a.eds.size() < b.eds.size() ? -1 : 1;
    return 0;
}

inline bool nf_less(const GraphOfGroups& g, const NormalForm& a, const NormalForm& b) {
    return nf_cmp(g, a, b) < 0;
}

inline size_t nf_hash(const NormalForm& a) {
    size_t h = 0x6f0a;
    hash_combine(h, static_cast<size_t>(a.start));
    for (size_t i = 0; i < a.elts.size(); ++i) {
        hash_combine(h, ge_hash(a.elts[i]));
        if (i < a.eds.size()) hash_combine(h, static_cast<size_t>(a.eds[i]));
    }
    return h;
}

inline std::string nf_to_string(const GraphOfGroups& g, const NormalForm& a) {
    std::string out;
    for (size_t i = 0; i < a.elts.size(); ++i) {
        const GroupSpec& spec = g.spec(nf_site(g, a, i));
        bool triv = ge_is_identity(a.elts[i]);
        if (!triv || a.eds.empty()) {
            if (!out.empty()) out += ".";
            out += ge_to_string(spec, a.elts[i]);
        }
        if (i < a.eds.size()) {
            if (!out.empty()) out += ".";
            out += g.edges[a.eds[i]].name;
        }
    }
    return out;
}

// x in tau_v Gamma_v tau_v^-1?  If so, the local element is returned.
inline std::optional<GroupElt> nf_vertex_member(const GraphOfGroups& g, const NormalForm& x, int v) {
    NFBuilder bld(g, v);
    bld.push_nf(nf_inv(g, nf_tree_path(g, v)));
    bld.push_nf(x);
    bld.push_nf(nf_tree_path(g, v));
    NormalForm y = bld.finish();
    if (!y.eds.empty()) return std::nullopt;
    return y.elts[0];
}

struct NFLess {
    const GraphOfGroups* g;
    bool operator()(const NormalForm& a, const NormalForm& b) const { return nf_less(*g, a, b); }
};

// All distinct elements represented by words of at most `syllables` letters
// with exponents bounded by `expbound`, shortlex-sorted.  Letters range over
// the vertex-group generators and the non-tree edge letters (tree edge
// letters are the identity and add nothing).
inline std::vector<NormalForm> enumerate_elements(const GraphOfGroups& g, int syllables,
                                                  const Integer& expbound) {
    std::vector<std::string> alphabet;
    for (const auto& v : g.vertices)
        for (const auto& gen : v.group.generators) alphabet.push_back(gen);
    for (size_t e = 0; e < g.ne(); ++e)
        if (!g.is_tree_edge(static_cast<int>(e))) alphabet.push_back(g.edges[e].name);

    std::map<NormalForm, bool, NFLess> seen{NFLess{&g}};
    std::vector<std::pair<std::string, Integer>> word;
    auto visit = [&](auto&& self) -> void {
        seen.emplace(normal_form(g, word), true);
        if (static_cast<int>(word.size()) >= syllables) return;
        for (const std::string& sym : alphabet) {
            if (!word.empty() && word.back().first == sym) continue;
            for (Integer k = 1; k <= expbound; ++k) {
                word.emplace_back(sym, k);
                self(self);
                word.back().second = -k;
                self(self);
                word.pop_back();
            }
        }
    };
    visit(visit);
    std::vector<NormalForm> out;
    for (const auto& [nf, _] : seen) out.push_back(nf);
    return out;
}

}  // namespace gognorm
