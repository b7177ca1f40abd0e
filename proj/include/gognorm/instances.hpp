#pragma once

/*
 * Bundled example inputs used by the test suite, the command-line self test,
 * and the files shipped under data/.  Group instances here; chain-complex
 * instances are further down once the complex types are in scope.
 */

#include "gognorm/graph_of_groups.hpp"

namespace gognorm::instances {

// Free product Z * Z: two vertices with infinite cyclic (free rank 1) groups,
// one geometric edge with trivial edge group.
inline GraphOfGroups zz() {
    GraphOfGroups g;
    g.vertices.push_back({"v", make_free_group({"a"})});
    g.vertices.push_back({"w", make_free_group({"b"})});
    GroupSpec triv = make_abelian_group({}, {});
    EdgeDecl e;
    e.name = "e";
    e.reverse = 1;
    e.origin = 0;
    e.target = 1;
    e.group = triv;
    EdgeDecl eb;
    eb.name = "ebar";
    eb.reverse = 0;
    eb.origin = 1;
    eb.target = 0;
    eb.group = triv;
    g.edges = {e, eb};
    g.tree_edge_names = {0};
    g.base = 0;
    g.finalize();
    return g;
}

// Trefoil knot group <x, y | x^2 = y^3> as an amalgam of two infinite cyclic
// groups over Z: the edge group embeds as <x^2> on one side, <y^3> on the
// other.
inline GraphOfGroups trefoil() {
    GraphOfGroups g;
    g.vertices.push_back({"v", make_free_group({"x"})});
    g.vertices.push_back({"w", make_free_group({"y"})});
    GroupSpec z = make_abelian_group({"t"}, {Integer(0)});
    EdgeDecl e;
    e.name = "e";
    e.reverse = 1;
    e.origin = 0;
    e.target = 1;
    e.group = z;
    e.images = {ge_from_letters(g.vertices[1].group, {{0, 3}})};  // t -> y^3
    EdgeDecl eb;
    eb.name = "ebar";
    eb.reverse = 0;
    eb.origin = 1;
    eb.target = 0;
    eb.group = z;
    eb.images = {ge_from_letters(g.vertices[0].group, {{0, 2}})};  // t -> x^2
    g.edges = {e, eb};
    g.tree_edge_names = {0};
    g.base = 0;
    g.finalize();
    return g;
}

// Baumslag-Solitar group BS(1,2) = <a, s | s a s^-1 = a^2>: one vertex, one
// geometric loop, edge group Z embedded as <a> at the head of s and <a^2> at
// the head of sbar.
inline GraphOfGroups bs12() {
    GraphOfGroups g;
    g.vertices.push_back({"v", make_free_group({"a"})});
    GroupSpec z = make_abelian_group({"t"}, {Integer(0)});
    EdgeDecl s;
    s.name = "s";
    s.reverse = 1;
    s.origin = 0;
    s.target = 0;
    s.group = z;
    s.images = {ge_from_letters(g.vertices[0].group, {{0, 1}})};  // t -> a
    EdgeDecl sb;
    sb.name = "sbar";
    sb.reverse = 0;
    sb.origin = 0;
    sb.target = 0;
    sb.group = z;
    sb.images = {ge_from_letters(g.vertices[0].group, {{0, 2}})};  // t -> a^2
    g.edges = {s, sb};
    g.tree_edge_names = {};
    g.base = 0;
    g.finalize();
    return g;
}

}  // namespace gognorm::instances

#include "gognorm/chain_complex.hpp"
#include "gognorm/gluing.hpp"

namespace gognorm::instances {

// Circle triangulated with three vertices and three edges.
inline FiniteChainComplex triangle_circle() {
    return simplicial_complex({{"a", "b"}, {"b", "c"}, {"a", "c"}});
}

// its fundamental 1-cycle, of norm 3
inline QVec triangle_cycle(const FiniteChainComplex& X) {
    return chain_from_map(X, 1, {{"a|b", Rational(1)}, {"b|c", Rational(1)}, {"a|c", Rational(-1)}});
}

// The full 2-simplex relative to its boundary.
inline PairComplex two_simplex_pair() {
    FiniteChainComplex X = simplicial_complex({{"a", "b", "c"}});
    return make_pair_complex(std::move(X),
                             {{"a", "b", "c"}, {"a|b", "a|c", "b|c"}, {}});
}

// The 7-vertex triangulation of the torus: triangles {i, i+1, i+3} and
// {i, i+2, i+3} mod 7.
inline FiniteChainComplex torus7() {
    std::vector<std::vector<std::string>> tris;
    auto v = [](int k) { return "v" + std::to_string(((k % 7) + 7) % 7); };
    for (int i = 0; i < 7; ++i) {
        tris.push_back({v(i), v(i + 1), v(i + 3)});
        tris.push_back({v(i), v(i + 2), v(i + 3)});
    }
    return simplicial_complex(tris);
}

// the fundamental 2-cycle: the one-dimensional kernel of the top boundary,
// scaled so every triangle carries coefficient +1 or -1
inline QVec torus7_cycle(const FiniteChainComplex& X) {
    QMat ker = matrix_kernel(X.d[2], X.dim(2));
    if (ker.size() != 1) throw Error("expected a one-dimensional top kernel");
    QVec z = ker[0];
    Rational scale = 0;
    for (const Rational& x : z)
        if (x != 0) {
            scale = rational_abs(x);
            break;
        }
    for (Rational& x : z) {
        x /= scale;
        if (x != 1 && x != -1) throw Error("fundamental cycle is not unimodular");
    }
    return z;
}

// Abstract pair: two 2-cells u, w over a single 1-cycle y, with w and y
// spanning the subcomplex.  The weight on w is adjustable; shrinking it makes
// the boundary-free representative u - w the cheap one.
inline PairComplex uw_pair(const Rational& w_weight = Rational(1)) {
    FiniteChainComplex X;
    X.names = {{}, {"y"}, {"u", "w"}};
    X.weights = {{}, {Rational(1)}, {Rational(1), w_weight}};
    X.d = {{}, {}, {{Rational(1), Rational(1)}}};
    X.validate();
    return make_pair_complex(std::move(X), {{}, {"y"}, {"w"}});
}

// Two annuli carrying copies of a two-rim band (rims z1, z2, band cells s
// with ds = z1 - z2 and s2 with ds2 = 2 z1 - 2 z2), glued band-to-band.  The
// outer cell of one piece attaches to z1, the other to z2 with opposite
// orientation, so the inner boundary of the summed cycles is z2 - z1 and a
// nonzero interface correction is forced; the cheap one uses s2.
inline std::pair<std::vector<GluePiece>, std::vector<GlueMatch>> annulus_glue_pieces() {
    auto band_piece = [](const std::string& name, const Rational& rim_sign,
                         const std::string& rim) {
        FiniteChainComplex X;
        X.names = {{}, {"o", "z1", "z2"}, {"t", "s", "s2"}};
        X.weights = {{}, QVec(3, Rational(1)), QVec(3, Rational(1))};
        QMat d2(3, QVec(3, Rational(0)));
        d2[0][0] = 1;  // dt = o +- rim
        d2[static_cast<size_t>(rim == "z1" ? 1 : 2)][0] = rim_sign;
        d2[1][1] = 1;   // ds = z1 - z2
        d2[2][1] = -1;
        d2[1][2] = 2;   // ds2 = 2 z1 - 2 z2
        d2[2][2] = -2;
        X.d = {{}, {}, std::move(d2)};
        X.validate();
        GluePiece gp;
        gp.name = name;
        gp.pair = make_pair_complex(std::move(X), {{}, {"o", "z1", "z2"}, {"s", "s2"}});
        gp.cycle = chain_from_map(gp.pair.X, 2, {{"t", Rational(1)}});
        return gp;
    };
    std::vector<GluePiece> pieces;
    pieces.push_back(band_piece("A", Rational(-1), "z1"));
    pieces.push_back(band_piece("B", Rational(1), "z2"));
    std::vector<GlueMatch> matches;
    matches.push_back({0, 1, 1, "z1", "z1", Rational(1)});
    matches.push_back({0, 1, 1, "z2", "z2", Rational(1)});
    matches.push_back({0, 1, 2, "s", "s", Rational(1)});
    matches.push_back({0, 1, 2, "s2", "s2", Rational(1)});
    return {std::move(pieces), std::move(matches)};
}

}  // namespace gognorm::instances
