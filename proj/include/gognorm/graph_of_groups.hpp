#pragma once

/*
 * A graph of groups: finite connected graph with a fixed-point-free reversal
 * involution on directed edges, a vertex group at each vertex (free or
 * finitely generated abelian), an abelian group on each geometric edge, and a
 * monomorphism from each edge group into the target vertex group of each
 * orientation.  Carries a chosen spanning tree and base vertex.
 *
 * JSON format (canonical form written by to_json):
 * {
 *   "vertices": [ {"name": ..., "group": {...}}, ... ],
 *   "edges":    [ {"name", "reverse", "origin", "target", "group",
 *                  "monomorphism": {edge_gen: [[target_gen, exp], ...]}}, ...],
 *   "spanning_tree": [edge names, one per geometric edge in the tree],
 *   "base_vertex": name
 * }
 * Group objects: {"kind": "free", "generators": [...]} or
 * {"kind": "abelian", "generators": [...], "invariant_factors": [...]}.
 * Both orientations of an edge are listed; their groups must agree and their
 * monomorphisms may differ (they are the two ends' embeddings).
 */

#include <deque>
#include <fstream>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gognorm/errors.hpp"
#include "gognorm/words.hpp"

namespace gognorm {

using ordered_json = nlohmann::ordered_json;

struct VertexDecl {
    std::string name;
    GroupSpec group;
};

struct EdgeDecl {
    std::string name;
    int reverse = -1;
    int origin = -1;
    int target = -1;
    GroupSpec group;                // equal on both orientations
    std::vector<GroupElt> images;   // h_e(gen_j) inside the target vertex group
};

// What a name in a flat input word refers to.
struct Symbol {
    enum Kind { VertexGen, EdgeLetter } kind;
    int vertex = -1;  // VertexGen: owning vertex
    int index = -1;   // VertexGen: generator index
    int edge = -1;    // EdgeLetter: directed edge id (the declared one)
};

class GraphOfGroups {
public:
    std::vector<VertexDecl> vertices;
    std::vector<EdgeDecl> edges;
    std::vector<int> tree_edge_names;  // edge ids as declared in spanning_tree
    int base = -1;

    size_t nv() const { return vertices.size(); }
    size_t ne() const { return edges.size(); }
    int reverse(int e) const { return edges[e].reverse; }
    int origin(int e) const { return edges[e].origin; }
    int target(int e) const { return edges[e].target; }
    const GroupSpec& spec(int v) const { return vertices[v].group; }
    const GroupSpec& edge_spec(int e) const { return edges[e].group; }
    // Monomorphism image of the edge group of e inside the group at target(e).
    const SubgroupImage& image(int e) const { return images_[e]; }
    bool is_tree_edge(int e) const { return tree_flag_[e]; }
    int geom_min(int e) const { return std::min(e, edges[e].reverse); }
    // Directed tree edges leading base -> v.
    const std::vector<int>& tree_path(int v) const { return tree_path_[v]; }

    int vertex_index(const std::string& name) const {
        auto it = vname_.find(name);
        if (it == vname_.end()) throw UnknownGeneratorError("unknown vertex: " + name);
        return it->second;
    }
    int edge_index(const std::string& name) const {
        auto it = ename_.find(name);
        if (it == ename_.end()) throw UnknownGeneratorError("unknown edge: " + name);
        return it->second;
    }
    Symbol resolve(const std::string& name) const {
        auto it = symbols_.find(name);
        if (it == symbols_.end()) throw UnknownGeneratorError("unknown generator or edge letter: " + name);
        return it->second;
    }

    static GraphOfGroups from_json(const ordered_json& j);
    ordered_json to_json() const;

    static GraphOfGroups load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw Error("cannot open " + path);
        ordered_json j = ordered_json::parse(in);
        return from_json(j);
    }
    void save(const std::string& path) const {
        std::ofstream out(path);
        out << to_json().dump(2) << "\n";
    }

    void finalize();  // validate and build derived data

private:
    std::vector<SubgroupImage> images_;
    std::vector<char> tree_flag_;
    std::vector<std::vector<int>> tree_path_;
    std::map<std::string, int> vname_, ename_;
    std::map<std::string, Symbol> symbols_;
};

inline GroupSpec group_spec_from_json(const ordered_json& j) {
    if (!j.contains("kind")) throw GraphMismatchError("group needs a kind");
    std::string kind = j.at("kind").get<std::string>();
    std::vector<std::string> gens;
    for (const auto& g : j.at("generators")) gens.push_back(g.get<std::string>());
    if (kind == "free") return make_free_group(gens);
    if (kind == "abelian") {
        std::vector<Integer> factors;
        for (const auto& f : j.at("invariant_factors")) factors.emplace_back(f.get<long long>());
        return make_abelian_group(gens, factors);
    }
    throw GraphMismatchError("unknown group kind: " + kind);
}

inline ordered_json group_spec_to_json(const GroupSpec& s) {
    ordered_json j;
    j["kind"] = s.kind == GroupKind::Free ? "free" : "abelian";
    j["generators"] = s.generators;
    if (s.kind == GroupKind::Abelian) {
        std::vector<long long> f;
        for (const Integer& d : s.invariant_factors) f.push_back(d.convert_to<long long>());
        j["invariant_factors"] = f;
    }
    return j;
}

inline GroupElt word_in_group(const GroupSpec& s, const ordered_json& letters) {
    std::vector<std::pair<int, Integer>> ls;
    for (const auto& l : letters) {
        std::string gen = l.at(0).get<std::string>();
        long long exp = l.at(1).get<long long>();
        auto it = std::find(s.generators.begin(), s.generators.end(), gen);
        if (it == s.generators.end())
            throw UnknownGeneratorError("unknown generator in word: " + gen);
        ls.emplace_back(static_cast<int>(it - s.generators.begin()), Integer(exp));
    }
    return ge_from_letters(s, ls);
}

inline ordered_json word_to_json(const GroupSpec& s, const GroupElt& g) {
    ordered_json out = ordered_json::array();
    if (s.kind == GroupKind::Free) {
        for (const auto& syl : g.word)
            out.push_back({s.generators[syl.first], syl.second.convert_to<long long>()});
    } else {
        for (size_t i = 0; i < s.rank(); ++i)
            if (g.coords[i] != 0)
                out.push_back({s.generators[i], g.coords[i].convert_to<long long>()});
    }
    return out;
}

inline GraphOfGroups GraphOfGroups::from_json(const ordered_json& j) {
    GraphOfGroups g;
    std::map<std::string, int> vid;
    for (const auto& vj : j.at("vertices")) {
        VertexDecl v;
        v.name = vj.at("name").get<std::string>();
        v.group = group_spec_from_json(vj.at("group"));
        if (vid.count(v.name)) throw GraphMismatchError("duplicate vertex name: " + v.name);
        vid[v.name] = static_cast<int>(g.vertices.size());
        g.vertices.push_back(v);
    }
    std::map<std::string, int> eid;
    std::vector<std::string> revnames;
    for (const auto& ej : j.at("edges")) {
        EdgeDecl e;
        e.name = ej.at("name").get<std::string>();
        if (eid.count(e.name)) throw GraphMismatchError("duplicate edge name: " + e.name);
        if (!vid.count(ej.at("origin").get<std::string>()))
            throw GraphMismatchError("edge origin is not a vertex");
        if (!vid.count(ej.at("target").get<std::string>()))
            throw GraphMismatchError("edge target is not a vertex");
        e.origin = vid[ej.at("origin").get<std::string>()];
        e.target = vid[ej.at("target").get<std::string>()];
        e.group = group_spec_from_json(ej.at("group"));
        revnames.push_back(ej.at("reverse").get<std::string>());
        const auto& mono = ej.at("monomorphism");
        for (const std::string& gen : e.group.generators) {
            if (!mono.contains(gen))
                throw GraphMismatchError("monomorphism missing edge generator " + gen + " on " + e.name);
            e.images.push_back(word_in_group(g.vertices[e.target].group, mono.at(gen)));
        }
        eid[e.name] = static_cast<int>(g.edges.size());
        g.edges.push_back(e);
    }
    for (size_t i = 0; i < g.edges.size(); ++i) {
        if (!eid.count(revnames[i]))
            throw GraphMismatchError("reverse of " + g.edges[i].name + " is not an edge");
        g.edges[i].reverse = eid[revnames[i]];
    }
    for (const auto& tn : j.at("spanning_tree")) {
        std::string name = tn.get<std::string>();
        if (!eid.count(name)) throw GraphMismatchError("spanning tree entry is not an edge: " + name);
        g.tree_edge_names.push_back(eid[name]);
    }
    std::string bn = j.at("base_vertex").get<std::string>();
    if (!vid.count(bn)) throw GraphMismatchError("base vertex is not a vertex");
    g.base = vid[bn];
    g.finalize();
    return g;
}

inline ordered_json GraphOfGroups::to_json() const {
    ordered_json j;
    j["vertices"] = ordered_json::array();
    for (const auto& v : vertices) {
        ordered_json vj;
        vj["name"] = v.name;
        vj["group"] = group_spec_to_json(v.group);
        j["vertices"].push_back(vj);
    }
    j["edges"] = ordered_json::array();
    for (const auto& e : edges) {
        ordered_json ej;
        ej["name"] = e.name;
        ej["reverse"] = edges[e.reverse].name;
        ej["origin"] = vertices[e.origin].name;
        ej["target"] = vertices[e.target].name;
        ej["group"] = group_spec_to_json(e.group);
        ordered_json mono;
        for (size_t k = 0; k < e.group.generators.size(); ++k)
            mono[e.group.generators[k]] = word_to_json(vertices[e.target].group, e.images[k]);
        ej["monomorphism"] = mono;
        j["edges"].push_back(ej);
    }
    j["spanning_tree"] = ordered_json::array();
    for (int e : tree_edge_names) j["spanning_tree"].push_back(edges[e].name);
    j["base_vertex"] = vertices[base].name;
    return j;
}

inline void GraphOfGroups::finalize() {
    const size_t n = nv(), m = ne();
    if (n == 0) throw GraphMismatchError("graph needs at least one vertex");

    // reversal involution, fixed-point-free, with matched endpoints and groups
    for (size_t e = 0; e < m; ++e) {
        int r = edges[e].reverse;
        if (r < 0 || static_cast<size_t>(r) >= m || r == static_cast<int>(e))
            throw GraphMismatchError("edge reversal must be fixed-point-free: " + edges[e].name);
        if (edges[r].reverse != static_cast<int>(e))
            throw GraphMismatchError("edge reversal is not an involution: " + edges[e].name);
        if (edges[e].origin != edges[r].target || edges[e].target != edges[r].origin)
            throw GraphMismatchError("reverse edge endpoints do not swap: " + edges[e].name);
        const GroupSpec &a = edges[e].group, &b = edges[r].group;
        if (a.kind != b.kind || a.generators != b.generators ||
            a.invariant_factors != b.invariant_factors)
            throw GraphMismatchError("edge group differs between orientations: " + edges[e].name);
    }

    // globally unique symbol names: vertex generators and edge letters
    symbols_.clear();
    vname_.clear();
    ename_.clear();
    for (size_t v = 0; v < n; ++v) {
        vname_[vertices[v].name] = static_cast<int>(v);
        const GroupSpec& s = vertices[v].group;
        for (size_t i = 0; i < s.rank(); ++i) {
            if (symbols_.count(s.generators[i]))
                throw GraphMismatchError("generator name reused: " + s.generators[i]);
            Symbol sym;
            sym.kind = Symbol::VertexGen;
            sym.vertex = static_cast<int>(v);
            sym.index = static_cast<int>(i);
            symbols_[s.generators[i]] = sym;
        }
    }
    for (size_t e = 0; e < m; ++e) {
        ename_[edges[e].name] = static_cast<int>(e);
        if (symbols_.count(edges[e].name))
            throw GraphMismatchError("edge letter name reused: " + edges[e].name);
        Symbol sym;
        sym.kind = Symbol::EdgeLetter;
        sym.edge = static_cast<int>(e);
        symbols_[edges[e].name] = sym;
    }

    // monomorphisms
    images_.clear();
    for (size_t e = 0; e < m; ++e) {
        images_.emplace_back(vertices[edges[e].target].group, edges[e].group, edges[e].images);
        if (!images_.back().valid())
            throw GraphMismatchError("edge " + edges[e].name + ": " + images_.back().issue);
    }

    // spanning tree: one orientation per geometric edge, forming a tree
    tree_flag_.assign(m, 0);
    std::set<int> geoms;
    for (int e : tree_edge_names) {
        int gm = geom_min(e);
        if (geoms.count(gm)) throw GraphMismatchError("spanning tree repeats a geometric edge");
        geoms.insert(gm);
        tree_flag_[e] = 1;
        tree_flag_[edges[e].reverse] = 1;
    }
    if (geoms.size() + 1 != n) throw GraphMismatchError("spanning tree must have nv - 1 edges");
    if (base < 0 || static_cast<size_t>(base) >= n) throw GraphMismatchError("invalid base vertex");

    // BFS over tree edges from the base; doubles as the connectivity check for
    // the tree, then verify the whole graph is connected too
    tree_path_.assign(n, {});
    std::vector<char> seen(n, 0);
    seen[base] = 1;
    std::queue<int> q;
    q.push(base);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (size_t e = 0; e < m; ++e) {
            if (!tree_flag_[e] || edges[e].origin != v) continue;
            int w = edges[e].target;
            if (seen[w]) continue;
            seen[w] = 1;
            tree_path_[w] = tree_path_[v];
            tree_path_[w].push_back(static_cast<int>(e));
            q.push(w);
        }
    }
    for (size_t v = 0; v < n; ++v)
        if (!seen[v]) throw GraphMismatchError("spanning tree does not reach vertex " + vertices[v].name);
}

}  // namespace gognorm
