#include <catch2/catch_amalgamated.hpp>

#include "gognorm/graph_of_groups.hpp"
#include "gognorm/instances.hpp"

using namespace gognorm;

TEST_CASE("bundled graphs validate and expose their structure") {
    GraphOfGroups zz = instances::zz();
    CHECK(zz.nv() == 2);
    CHECK(zz.ne() == 2);
    CHECK(zz.reverse(0) == 1);
    CHECK(zz.is_tree_edge(0));
    CHECK(zz.image(0).trivial_image());
    CHECK(zz.tree_path(1) == std::vector<int>{0});
    CHECK(zz.tree_path(0).empty());

    GraphOfGroups tr = instances::trefoil();
    CHECK(tr.image(0).contains(ge_from_letters(tr.spec(1), {{0, 6}})));
    CHECK_FALSE(tr.image(0).contains(ge_from_letters(tr.spec(1), {{0, 2}})));
    CHECK(tr.image(1).contains(ge_from_letters(tr.spec(0), {{0, -4}})));

    GraphOfGroups bs = instances::bs12();
    CHECK(bs.nv() == 1);
    CHECK_FALSE(bs.is_tree_edge(0));
    // h_s is onto <a>, h_sbar onto <a^2>
    CHECK(bs.image(0).contains(ge_from_letters(bs.spec(0), {{0, 5}})));
    CHECK_FALSE(bs.image(1).contains(ge_from_letters(bs.spec(0), {{0, 5}})));
}

TEST_CASE("json round trip is canonical and loads back identically") {
    for (const GraphOfGroups& g :
         {instances::zz(), instances::trefoil(), instances::bs12()}) {
        std::string s1 = g.to_json().dump(2);
        GraphOfGroups g2 = GraphOfGroups::from_json(ordered_json::parse(s1));
        std::string s2 = g2.to_json().dump(2);
        CHECK(s1 == s2);
    }
}

TEST_CASE("graph validation rejects malformed declarations") {
    // reversal that is not an involution
    GraphOfGroups g;
    g.vertices.push_back({"v", make_free_group({"a"})});
    GroupSpec triv = make_abelian_group({}, {});
    EdgeDecl e;
    e.name = "e";
    e.reverse = 0;  // fixed point
    e.origin = 0;
    e.target = 0;
    e.group = triv;
    g.edges = {e};
    g.tree_edge_names = {};
    g.base = 0;
    CHECK_THROWS_AS(g.finalize(), GraphMismatchError);

    // name collision between a vertex generator and an edge letter
    GraphOfGroups h = instances::zz();
    h.edges[0].name = "a";
    CHECK_THROWS_AS(h.finalize(), GraphMismatchError);

    // monomorphism with a kernel: t -> identity in a free vertex group
    GraphOfGroups t = instances::trefoil();
    t.edges[0].images = {ge_identity(t.spec(1))};
    CHECK_THROWS_AS(t.finalize(), GraphMismatchError);

    // missing spanning tree edge
    GraphOfGroups z = instances::zz();
    z.tree_edge_names = {};
    CHECK_THROWS_AS(z.finalize(), GraphMismatchError);

    // unknown names resolve to errors
    GraphOfGroups ok = instances::zz();
    CHECK_THROWS_AS(ok.resolve("nope"), UnknownGeneratorError);
    CHECK(ok.resolve("a").kind == Symbol::VertexGen);
    CHECK(ok.resolve("e").kind == Symbol::EdgeLetter);
}
