#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "gognorm/chain_complex.hpp"
#include "gognorm/gluing.hpp"
#include "gognorm/instances.hpp"
#include "gognorm/seminorm.hpp"

using namespace gognorm;
using namespace gognorm::instances;

namespace {

Rational q(long num, long den = 1) { return Rational(num) / Rational(den); }

void check_certificates(const std::vector<LPProblem>& probs,
                        const std::vector<LPResult>& certs) {
    REQUIRE(probs.size() == certs.size());
    for (size_t i = 0; i < probs.size(); ++i) REQUIRE(lp_verify(probs[i], certs[i]).empty());
}

// a seeded supply of small weighted pairs with a compatible relative cycle
struct RandomPair {
    PairComplex P;
    QVec z;  // degree-2 relative cycle
};

RandomPair random_pair(std::mt19937_64& rng) {
    auto pick = [&](std::uint64_t n) { return rng() % n; };
    size_t nv = 4 + pick(2);
    std::vector<std::string> verts;
    for (size_t i = 0; i < nv; ++i) verts.push_back("p" + std::to_string(i));
    std::set<std::vector<std::string>> tris;
    size_t want = 3 + pick(4);
    while (tris.size() < want) {
        std::vector<std::string> t;
        while (t.size() < 3) {
            std::string v = verts[pick(nv)];
            if (std::find(t.begin(), t.end(), v) == t.end()) t.push_back(v);
        }
        std::sort(t.begin(), t.end());
        tris.insert(t);
    }
    FiniteChainComplex X =
        simplicial_complex(std::vector<std::vector<std::string>>(tris.begin(), tris.end()));
    for (auto& dw : X.weights)
        for (auto& w : dw) w = q(1 + static_cast<long>(pick(4)), 1 + static_cast<long>(pick(3)));

    // subcomplex: the downward closure of a random batch of simplices
    std::vector<std::vector<bool>> keep(X.names.size());
    for (size_t n = 0; n < X.names.size(); ++n) {
        keep[n].assign(X.dim(static_cast<int>(n)), false);
        for (size_t i = 0; i < keep[n].size(); ++i) keep[n][i] = pick(3) == 0;
    }
    for (int n = X.top(); n >= 1; --n)
        for (size_t i = 0; i < keep[static_cast<size_t>(n)].size(); ++i)
            if (keep[static_cast<size_t>(n)][i])
                for (size_t r = 0; r < X.dim(n - 1); ++r)
                    if (X.d[static_cast<size_t>(n)][r][i] != 0)
                        keep[static_cast<size_t>(n) - 1][r] = true;
    RandomPair rp;
    PairComplex P;
    P.X = std::move(X);
    P.sub.resize(P.X.names.size());
    for (size_t n = 0; n < keep.size(); ++n)
        for (size_t i = 0; i < keep[n].size(); ++i)
            if (keep[n][i]) P.sub[n].push_back(static_cast<int>(i));
    P.validate();

    // relative 2-cycles: kernel of the boundary restricted to rows off the
    // subcomplex, then a random combination
    std::vector<bool> ysub = P.sub_mask(1);
    QMat restricted;
    for (size_t r = 0; r < P.X.dim(1); ++r)
        if (!ysub[r]) restricted.push_back(P.X.d[2][r]);
    QMat ker = matrix_kernel(restricted, P.X.dim(2));
    rp.z = zero_chain(P.X, 2);
    for (const QVec& k : ker) {
        Rational co = q(static_cast<long>(pick(5)) - 2);
        for (size_t i = 0; i < rp.z.size(); ++i) rp.z[i] += co * k[i];
    }
    rp.P = std::move(P);
    return rp;
}

}  // namespace

TEST_CASE("chain complexes validate their structure") {
    FiniteChainComplex X = simplicial_complex({{"a", "b", "c"}});
    REQUIRE(X.dim(0) == 3);
    REQUIRE(X.dim(1) == 3);
    REQUIRE(X.dim(2) == 1);

    SECTION("boundary signs follow the alternating rule") {
        QVec t = chain_from_map(X, 2, {{"a|b|c", q(1)}});
        QVec dt = boundary(X, 2, t);
        CHECK(dt[static_cast<size_t>(X.index_of(1, "b|c"))] == 1);
        CHECK(dt[static_cast<size_t>(X.index_of(1, "a|c"))] == -1);
        CHECK(dt[static_cast<size_t>(X.index_of(1, "a|b"))] == 1);
        QVec ddt = boundary(X, 1, dt);
        for (const Rational& v : ddt) CHECK(v == 0);
    }

    SECTION("the theta norm trades chain mass against boundary mass") {
        QVec t = chain_from_map(X, 2, {{"a|b|c", q(1)}});
        CHECK(theta_norm(X, 2, t, q(2)) == 7);  // 1 + 2 * 3
        CHECK(theta_norm(X, 2, t, q(0)) == 1);
        CHECK(theta_norm(X, 2, zero_chain(X, 2), q(5)) == 0);
        QVec z = triangle_cycle(triangle_circle());
        FiniteChainComplex C = triangle_circle();
        CHECK(theta_norm(C, 1, z, q(7)) == l1(C, 1, z));  // cycles ignore theta
        CHECK_THROWS_AS(theta_norm(X, 2, t, q(-1)), NegativeThetaError);
    }

    SECTION("defective complexes are rejected") {
        FiniteChainComplex bad = X;
        bad.d[2][0][0] += 1;  // break dd = 0
        CHECK_THROWS_AS(bad.validate(), MalformedProblemError);
        bad = X;
        bad.weights[1][0] = 0;
        CHECK_THROWS_AS(bad.validate(), MalformedProblemError);
        bad = X;
        bad.names[0][1] = bad.names[0][0];
        CHECK_THROWS_AS(bad.validate(), MalformedProblemError);
        CHECK_THROWS_AS(boundary(X, 2, QVec(2, q(1))), MalformedProblemError);
        CHECK_THROWS_AS(simplicial_complex({{"a", "a"}}), Error);
    }

    SECTION("pairs must be closed under the boundary") {
        PairComplex P = two_simplex_pair();
        P.validate();
        CHECK(P.sub_dim(0) == 3);
        CHECK(P.sub_dim(1) == 3);
        CHECK(P.sub_dim(2) == 0);
        CHECK_THROWS_AS(make_pair_complex(simplicial_complex({{"a", "b", "c"}}),
                                          {{}, {"a|b"}, {}}),
                        MalformedProblemError);
    }

    SECTION("JSON round trip and the simplicial shorthand") {
        nlohmann::ordered_json j = complex_to_json(X);
        FiniteChainComplex back = complex_from_json(j);
        CHECK(back.names == X.names);
        CHECK(back.weights == X.weights);
        CHECK(back.d == X.d);

        nlohmann::ordered_json sj;
        sj["simplicial"] = {{"a", "b"}, {"b", "c"}, {"a", "c"}};
        FiniteChainComplex circle = complex_from_json(sj);
        FiniteChainComplex direct = triangle_circle();
        CHECK(circle.names == direct.names);
        CHECK(circle.d == direct.d);

        sj["weights"] = {{"a|b", "2/3"}};
        FiniteChainComplex weighted = complex_from_json(sj);
        CHECK(weighted.weights[1][static_cast<size_t>(weighted.index_of(1, "a|b"))] == q(2, 3));
        sj["weights"] = {{"nope", "1"}};
        CHECK_THROWS_AS(complex_from_json(sj), Error);

        nlohmann::ordered_json bad;
        bad["degrees"] = {{{"names", {"x"}}, {"weights", {"1", "1"}}}};
        CHECK_THROWS_AS(complex_from_json(bad), Error);

        QVec t = chain_from_map(X, 2, {{"a|b|c", q(3, 2)}});
        CHECK(chain_from_json(X, 2, chain_to_json(X, 2, t)) == t);
    }
}

TEST_CASE("mapping cones square to zero and split the norm") {
    PairComplex P = two_simplex_pair();
    FiniteChainComplex C = mapping_cone(P);
    C.validate();
    // degree n of the cone stacks X_n on top of the shifted subcomplex
    REQUIRE(C.dim(1) == P.X.dim(1) + 3);
    REQUIRE(C.dim(2) == P.X.dim(2) + 3);
    REQUIRE(C.dim(3) == 3);

    SECTION("cone cycles are chains whose boundary retracts onto the subcomplex") {
        QVec t = chain_from_map(P.X, 2, {{"a|b|c", q(1)}});
        ConeChain zc = beta_inverse(P, 2, t);
        CHECK(cone_is_cycle(P, zc));
        ConeChain flipped = zc;
        for (Rational& x : flipped.v) x = -x;
        CHECK_FALSE(cone_is_cycle(P, flipped));
        ConeChain b = cone_boundary(P, zc);
        for (const Rational& x : b.u) CHECK(x == 0);
    }

    SECTION("the cone norm weighs the two summands separately") {
        PairComplex U = uw_pair();
        ConeChain zc = cone_chain(U, 2, chain_from_map(U.X, 2, {{"u", q(1)}}), {q(-1)});
        CHECK(cone_theta_norm(U, zc, q(3)) == 1 + 3);
        CHECK_THROWS_AS(cone_theta_norm(U, zc, q(0)), NegativeThetaError);
    }

    SECTION("boundary of boundary vanishes on sampled cone chains") {
        std::mt19937_64 rng(411u);
        for (int trial = 0; trial < 20; ++trial) {
            ConeChain cc{2, zero_chain(P.X, 2), QVec(P.sub_dim(1), q(0))};
            for (Rational& x : cc.u) x = q(static_cast<long>(rng() % 7) - 3);
            for (Rational& x : cc.v) x = q(static_cast<long>(rng() % 7) - 3);
            ConeChain bb = cone_boundary(P, cone_boundary(P, cc));
            for (const Rational& x : bb.u) REQUIRE(x == 0);
            for (const Rational& x : bb.v) REQUIRE(x == 0);
        }
    }
}

TEST_CASE("seminorms of the bundled classes") {
    SECTION("triangle circle: no fillers, so the norm of the cycle itself") {
        FiniteChainComplex C = triangle_circle();
        QVec z = triangle_cycle(C);
        SeminormResult r = homology_seminorm(C, 1, z, Theta::finite(0));
        CHECK(r.value == 3);
        CHECK(r.minimizer == z);
        check_certificates(r.problems, r.certificates);
    }

    SECTION("2-simplex relative to its boundary") {
        PairComplex P = two_simplex_pair();
        QVec t = chain_from_map(P.X, 2, {{"a|b|c", q(1)}});
        CHECK(homology_seminorm(P, 2, t, Theta::finite(0)).value == 1);
        // the representative is unique, so theta just adds the boundary mass
        CHECK(homology_seminorm(P, 2, t, Theta::finite(2)).value == 7);
    }

    SECTION("7-vertex torus: rank pins the representative") {
        FiniteChainComplex T = torus7();
        REQUIRE(T.dim(0) == 7);
        REQUIRE(T.dim(1) == 21);
        REQUIRE(T.dim(2) == 14);
        // no 3-cells and a one-dimensional top kernel: the fundamental class
        // has a unique representative cycle
        REQUIRE(matrix_kernel(T.d[2], T.dim(2)).size() == 1);
        QVec z = torus7_cycle(T);
        for (const Rational& x : z) REQUIRE(rational_abs(x) == 1);
        SeminormResult r = homology_seminorm(T, 2, z, Theta::finite(0));
        CHECK(r.value == 14);
        check_certificates(r.problems, r.certificates);
    }

    SECTION("non-cycles are refused") {
        FiniteChainComplex C = triangle_circle();
        QVec notz = chain_from_map(C, 1, {{"a|b", q(1)}});
        CHECK_THROWS_AS(homology_seminorm(C, 1, notz, Theta::finite(0)), NotACycleError);
        PairComplex U = uw_pair();
        // du = y lies in the subcomplex, so u is a relative cycle, but it is
        // not an absolute one
        QVec u = chain_from_map(U.X, 2, {{"u", q(1)}});
        CHECK_THROWS_AS(homology_seminorm(U.X, 2, u, Theta::finite(0)), NotACycleError);
        CHECK(homology_seminorm(U, 2, u, Theta::finite(0)).value == 1);
    }

    SECTION("zero class") {
        PairComplex U = uw_pair();
        CHECK(homology_seminorm(U, 2, zero_chain(U.X, 2), Theta::finite(3)).value == 0);
    }

    SECTION("theta = infinity minimizes the boundary first") {
        PairComplex U = uw_pair();
        QVec u = chain_from_map(U.X, 2, {{"u", q(1)}});
        SeminormResult r = homology_seminorm(U, 2, u, Theta::inf());
        // u - w is the only representative with vanishing boundary
        CHECK(r.boundary_l1 == 0);
        CHECK(r.value == 2);
        check_certificates(r.problems, r.certificates);

        FiniteChainComplex C = triangle_circle();
        SeminormResult rc = homology_seminorm(C, 1, triangle_cycle(C), Theta::inf());
        CHECK(rc.boundary_l1 == 0);
        CHECK(rc.value == 3);
    }
}

TEST_CASE("cone and quotient seminorms agree") {
    SECTION("hand oracle on the u/w pair") {
        PairComplex U = uw_pair();
        QVec u = chain_from_map(U.X, 2, {{"u", q(1)}});
        // representatives are u + lambda w; at theta = 3 the candidates are
        // 1 + 3 (lambda = 0) and 2 (lambda = -1)
        SeminormResult rel = homology_seminorm(U, 2, u, Theta::finite(3));
        CHECK(rel.value == 2);
        CHECK(rel.minimizer == chain_from_map(U.X, 2, {{"u", q(1)}, {"w", q(-1)}}));
        ConeSeminormResult cone = cone_seminorm(U, beta_inverse(U, 2, u), Theta::finite(3));
        CHECK(cone.value == 2);
        check_certificates(cone.problems, cone.certificates);
    }

    SECTION("2-simplex pair at theta = 1") {
        PairComplex P = two_simplex_pair();
        QVec t = chain_from_map(P.X, 2, {{"a|b|c", q(1)}});
        Rational rel = homology_seminorm(P, 2, t, Theta::finite(1)).value;
        Rational cone = cone_seminorm(P, beta_inverse(P, 2, t), Theta::finite(1)).value;
        CHECK(rel == 4);
        CHECK(cone == rel);
    }

    SECTION("zero class and rejected inputs") {
        PairComplex U = uw_pair();
        ConeChain zero{2, zero_chain(U.X, 2), QVec(U.sub_dim(1), q(0))};
        CHECK(cone_seminorm(U, zero, Theta::finite(1)).value == 0);
        ConeChain notcycle = cone_chain(U, 2, chain_from_map(U.X, 2, {{"u", q(1)}}), {q(1)});
        CHECK_THROWS_AS(cone_seminorm(U, notcycle, Theta::finite(1)), NotAConeCycleError);
        ConeChain ok = beta_inverse(U, 2, chain_from_map(U.X, 2, {{"u", q(1)}}));
        CHECK_THROWS_AS(cone_seminorm(U, ok, Theta::finite(0)), NegativeThetaError);
        CHECK_THROWS_AS(cone_seminorm(U, ok, Theta::inf()), Error);
    }
}

TEST_CASE("the comparison maps invert each other") {
    PairComplex U = uw_pair();
    QVec u = chain_from_map(U.X, 2, {{"u", q(1)}});

    ConeChain zc = beta_inverse(U, 2, u);
    CHECK(zc.v == QVec{q(-1)});
    CHECK(beta_forward(U, zc) == u);

    // an absolute cycle picks up a vanishing second leg
    FiniteChainComplex C = triangle_circle();
    PairComplex CP = make_pair_complex(C, {});
    ConeChain circ = beta_inverse(CP, 1, triangle_cycle(C));
    CHECK(circ.v.empty());

    // the round trip reproduces the cone cycle on the nose, so the class is
    // untouched; the difference is the zero chain, whose cone norm vanishes
    ConeChain back = beta_inverse(U, 2, beta_forward(U, zc));
    CHECK(back.u == zc.u);
    CHECK(back.v == zc.v);
    ConeChain diff{2, zero_chain(U.X, 2), QVec(U.sub_dim(1), q(0))};
    CHECK(cone_seminorm(U, diff, Theta::finite(1)).value == 0);

    CHECK_THROWS_AS(beta_inverse(CP, 1, chain_from_map(C, 1, {{"a|b", q(1)}})),
                    NotACycleError);
    ConeChain notcycle = cone_chain(U, 2, u, {q(1)});
    CHECK_THROWS_AS(beta_forward(U, notcycle), NotAConeCycleError);
}

TEST_CASE("duality attains the seminorm") {
    SECTION("circle: the all-ones functional") {
        FiniteChainComplex C = triangle_circle();
        QVec z = triangle_cycle(C);
        DualityResult d = duality_max(C, 1, z, Theta::finite(0));
        CHECK(d.value == 3);
        // witness inside the dual ball, attaining the value on z
        Rational attained = 0;
        for (size_t i = 0; i < z.size(); ++i) {
            CHECK(rational_abs(d.f[i]) <= C.weights[1][i]);
            attained += d.f[i] * z[i];
        }
        CHECK(attained == 3);
        check_certificates(d.problems, d.certificates);
    }

    SECTION("torus: a plus-minus-one witness") {
        FiniteChainComplex T = torus7();
        QVec z = torus7_cycle(T);
        DualityResult d = duality_max(T, 2, z, Theta::finite(0));
        CHECK(d.value == 14);
        for (size_t i = 0; i < z.size(); ++i) CHECK(rational_abs(d.f[i]) == 1);
    }

    SECTION("relative duality with the boundary functional") {
        PairComplex U = uw_pair();
        QVec u = chain_from_map(U.X, 2, {{"u", q(1)}});
        DualityResult d = duality_max(U, 2, u, Theta::finite(3));
        CHECK(d.value == 2);
        // the witness pair must vanish on subcomplex chains: f(w) + g(dw) = 0
        Rational fw = d.f[static_cast<size_t>(U.X.index_of(2, "w"))];
        Rational gy = d.g[static_cast<size_t>(U.X.index_of(1, "y"))];
        CHECK(fw + gy == 0);
        CHECK(rational_abs(gy) <= 3);
    }

    SECTION("zero class, infinite theta, non-cycles") {
        PairComplex U = uw_pair();
        CHECK(duality_max(U, 2, zero_chain(U.X, 2), Theta::finite(1)).value == 0);
        QVec u = chain_from_map(U.X, 2, {{"u", q(1)}});
        CHECK_THROWS_AS(duality_max(U, 2, u, Theta::inf()), Error);
        FiniteChainComplex C = triangle_circle();
        CHECK_THROWS_AS(
            duality_max(C, 1, chain_from_map(C, 1, {{"a|b", q(1)}}), Theta::finite(0)),
            NotACycleError);
    }
}

TEST_CASE("thurston representatives") {
    SECTION("weighted u/w pair: the success path") {
        PairComplex U = uw_pair(q(2, 5));
        QVec u = chain_from_map(U.X, 2, {{"u", q(1)}});
        ThurstonResult t = thurston_representative(U, 2, u, q(1, 2));
        CHECK(t.class_norm == 1);
        CHECK(t.theta == 3);
        CHECK(t.status == ThurstonStatus::Success);
        CHECK(t.representative == chain_from_map(U.X, 2, {{"u", q(1)}, {"w", q(-1)}}));
        CHECK(t.chain_l1 == q(7, 5));
        CHECK(t.boundary_l1 == 0);
    }

    SECTION("rigid 2-simplex pair: the honest-failure path") {
        PairComplex P = two_simplex_pair();
        QVec t2 = chain_from_map(P.X, 2, {{"a|b|c", q(1)}});
        ThurstonResult t = thurston_representative(P, 2, t2, q(1));
        CHECK(t.status == ThurstonStatus::NotGuaranteed);
        CHECK(t.chain_l1 == 1);
        CHECK(t.boundary_l1 == 3);  // measured and reported, exceeding eps = 1
        CHECK(t.class_norm == 1);
        CHECK(t.theta == 2);
    }

    SECTION("a class with an absolute-cycle representative always succeeds") {
        FiniteChainComplex C = triangle_circle();
        PairComplex CP = make_pair_complex(C, {});
        QVec z = triangle_cycle(C);
        for (long e : {1L, 3L}) {
            ThurstonResult t = thurston_representative(CP, 1, z, q(e, 2));
            CHECK(t.status == ThurstonStatus::Success);
            CHECK(t.representative == z);
            CHECK(t.boundary_l1 == 0);
        }
    }

    SECTION("eps must be positive") {
        PairComplex U = uw_pair();
        QVec u = chain_from_map(U.X, 2, {{"u", q(1)}});
        CHECK_THROWS_AS(thurston_representative(U, 2, u, q(0)), NonpositiveEpsilonError);
        CHECK_THROWS_AS(thurston_representative(U, 2, u, q(-1)), NonpositiveEpsilonError);
    }
}

TEST_CASE("random pairs: equality of the three computations") {
    std::mt19937_64 rng(0x5EEDu);
    const std::vector<Rational> thetas{q(1, 2), q(1), q(3)};
    for (int trial = 0; trial < 12; ++trial) {
        RandomPair rp = random_pair(rng);
        size_t basis = 0;
        for (size_t n = 0; n < rp.P.X.names.size(); ++n) basis += rp.P.X.dim(static_cast<int>(n));
        INFO("trial " << trial << ", basis " << basis);
        REQUIRE(basis <= 30);

        Rational prev = homology_seminorm(rp.P, 2, rp.z, Theta::finite(0)).value;
        Rational v_half, v_three;
        for (const Rational& th : thetas) {
            SeminormResult hs = homology_seminorm(rp.P, 2, rp.z, Theta::finite(th));
            check_certificates(hs.problems, hs.certificates);
            // the reported value is the norm of the reported representative
            REQUIRE(hs.value == l1(rp.P.X, 2, hs.minimizer) +
                                    th * l1(rp.P.X, 1, boundary(rp.P.X, 2, hs.minimizer)));

            ConeSeminormResult cs = cone_seminorm(rp.P, beta_inverse(rp.P, 2, rp.z),
                                                  Theta::finite(th));
            REQUIRE(cs.value == hs.value);

            DualityResult du = duality_max(rp.P, 2, rp.z, Theta::finite(th));
            REQUIRE(du.value == hs.value);
            check_certificates(du.problems, du.certificates);

            REQUIRE(hs.value >= prev);  // monotone in theta
            prev = hs.value;
            if (th == q(1, 2)) v_half = hs.value;
            if (th == q(3)) v_three = hs.value;
        }
        // the optimal value is a minimum of linear functions of theta, hence
        // concave: the middle sample sits above the chord
        Rational mid = homology_seminorm(rp.P, 2, rp.z, Theta::finite(1)).value;
        REQUIRE(mid * q(5, 2) >= q(2) * v_half + q(1, 2) * v_three);
    }
}

TEST_CASE("gluing assembles relative cycles") {
    SECTION("two segments sharing an endpoint") {
        auto seg = [](const std::string& name, const std::string& v0, const std::string& v1) {
            GluePiece gp;
            gp.name = name;
            gp.pair = make_pair_complex(simplicial_complex({{v0, v1}}), {{v0, v1}});
            gp.cycle = QVec{q(1)};
            return gp;
        };
        std::vector<GluePiece> pieces{seg("L", "a", "b"), seg("R", "b", "c")};
        std::vector<GlueMatch> matches{{0, 1, 0, "b", "b", q(1)}};
        GlueResult g = glue_assemble(pieces, matches, 1);
        CHECK(g.correction == zero_chain(g.glued.X, 1));
        CHECK(g.correction_l1 == 0);
        CHECK(g.glued_cycle == g.total);
        CHECK(l1(g.glued.X, 1, g.glued_cycle) == 2);
        // outer boundary: the two unshared endpoints
        CHECK(g.glued.sub[0].size() == 2);
        CHECK(g.interface_classes[0].size() == 1);
    }

    SECTION("two triangles sharing an edge: interface has no 2-chains") {
        auto tri = [](const std::string& name, const std::string& apex) {
            GluePiece gp;
            gp.name = name;
            gp.pair = make_pair_complex(
                simplicial_complex({{"a", "b", apex}}),
                {{"a", "b", apex}, {"a|b", "a|" + apex, "b|" + apex}, {}});
            gp.cycle = QVec{q(1)};
            return gp;
        };
        std::vector<GluePiece> pieces{tri("P", "c"), tri("Q", "d")};
        // reversing the shared edge swaps its endpoints
        std::vector<GlueMatch> matches{{0, 1, 0, "a", "b", q(1)},
                                       {0, 1, 0, "b", "a", q(1)},
                                       {0, 1, 1, "a|b", "a|b", q(-1)}};
        GlueResult g = glue_assemble(pieces, matches, 2);
        CHECK(g.correction_l1 == 0);
        CHECK(g.glued_cycle == g.total);
        CHECK(l1(g.glued.X, 2, g.glued_cycle) == 2);
        CHECK(g.interface_classes[1].size() == 1);
        CHECK(g.interface_classes[2].empty());
        // four outer edges, and the closure pulls in every vertex
        CHECK(g.glued.sub[1].size() == 4);
        CHECK(g.glued.sub[0].size() == 4);
    }

    SECTION("the annulus instance needs a fractional correction") {
        auto [pieces, matches] = annulus_glue_pieces();
        GlueResult g = glue_assemble(pieces, matches, 2);
        int s2 = g.glued.X.index_of(2, "A.s2");
        REQUIRE(s2 >= 0);
        QVec expect = zero_chain(g.glued.X, 2);
        expect[static_cast<size_t>(s2)] = q(-1, 2);
        CHECK(g.correction == expect);
        CHECK(g.correction_l1 == q(1, 2));
        // the corrected cycle closes up to the two outer circles
        QVec d = boundary(g.glued.X, 2, g.glued_cycle);
        CHECK(d[static_cast<size_t>(g.glued.X.index_of(1, "A.o"))] == 1);
        CHECK(d[static_cast<size_t>(g.glued.X.index_of(1, "B.o"))] == 1);
        CHECK(sub_supported(g.glued, 1, d));
        // assembly inequality, here tight
        Rational pieces_l1 = 0;
        for (const auto& gp : pieces) pieces_l1 += l1(gp.pair.X, 2, gp.cycle);
        CHECK(l1(g.glued.X, 2, g.glued_cycle) <= pieces_l1 + g.correction_l1);
        CHECK(l1(g.glued.X, 2, g.glued_cycle) == q(5, 2));
        check_certificates(g.problems, g.certificates);
    }

    SECTION("identifications that are not chain maps are refused") {
        auto tri = [](const std::string& name, const std::string& apex) {
            GluePiece gp;
            gp.name = name;
            gp.pair = make_pair_complex(
                simplicial_complex({{"a", "b", apex}}),
                {{"a", "b", apex}, {"a|b", "a|" + apex, "b|" + apex}, {}});
            gp.cycle = QVec{q(1)};
            return gp;
        };
        std::vector<GluePiece> pieces{tri("P", "c"), tri("Q", "d")};
        // edge reversed but endpoints matched straight
        std::vector<GlueMatch> bad{{0, 1, 0, "a", "a", q(1)},
                                   {0, 1, 0, "b", "b", q(1)},
                                   {0, 1, 1, "a|b", "a|b", q(-1)}};
        CHECK_THROWS_AS(glue_assemble(pieces, bad, 2), InterfaceMismatchError);

        // straight identification is a chain map, but then both triangles
        // shed boundary onto the shared edge and nothing can absorb it
        std::vector<GlueMatch> straight{{0, 1, 0, "a", "a", q(1)},
                                        {0, 1, 0, "b", "b", q(1)},
                                        {0, 1, 1, "a|b", "a|b", q(1)}};
        CHECK_THROWS_AS(glue_assemble(pieces, straight, 2), UnfillableError);

        // conflicting orientation declarations around one interface cell
        std::vector<GlueMatch> twice{{0, 1, 0, "a", "a", q(1)},
                                     {0, 1, 0, "a", "a", q(-1)}};
        CHECK_THROWS_AS(glue_assemble(pieces, twice, 2), InterfaceMismatchError);

        // interface cells must lie on the declared piece boundaries
        std::vector<GlueMatch> interior{{0, 1, 2, "a|b|c", "a|b|d", q(1)}};
        CHECK_THROWS_AS(glue_assemble(pieces, interior, 2), InterfaceMismatchError);

        // self-identification of a single cell
        std::vector<GlueMatch> selfie{{0, 0, 0, "a", "a", q(1)}};
        CHECK_THROWS_AS(glue_assemble(pieces, selfie, 2), InterfaceMismatchError);

        // weights must agree across an identification
        auto wpieces = pieces;
        wpieces[0].pair.X.weights[0][0] = q(2);
        std::vector<GlueMatch> wm{{0, 1, 0, wpieces[0].pair.X.names[0][0],
                                   wpieces[1].pair.X.names[0][0], q(1)}};
        CHECK_THROWS_AS(glue_assemble(wpieces, wm, 2), InterfaceMismatchError);

        // piece cycles must be relative cycles
        auto npieces = pieces;
        npieces[0].pair = make_pair_complex(simplicial_complex({{"a", "b", "c"}}),
                                            {{"a", "b", "c"}, {}, {}});
        CHECK_THROWS_AS(glue_assemble(npieces, {}, 2), NotACycleError);
    }

    SECTION("the JSON form reproduces the built-in instance") {
        auto [pieces, matches] = annulus_glue_pieces();
        nlohmann::ordered_json j;
        j["degree"] = 2;
        j["pieces"] = nlohmann::ordered_json::array();
        for (const auto& gp : pieces) {
            nlohmann::ordered_json pj;
            pj["name"] = gp.name;
            pj["pair"]["complex"] = complex_to_json(gp.pair.X);
            std::vector<std::vector<std::string>> subnames;
            for (size_t n = 0; n < gp.pair.sub.size(); ++n) {
                subnames.push_back({});
                for (int i : gp.pair.sub[n])
                    subnames.back().push_back(
                        gp.pair.X.names[n][static_cast<size_t>(i)]);
            }
            pj["pair"]["subcomplex"] = subnames;
            pj["cycle"] = chain_to_json(gp.pair.X, 2, gp.cycle);
            j["pieces"].push_back(pj);
        }
        j["matches"] = nlohmann::ordered_json::array();
        for (const auto& m : matches) {
            nlohmann::ordered_json mj;
            mj["a"] = pieces[m.piece_a].name;
            mj["b"] = pieces[m.piece_b].name;
            mj["degree"] = m.degree;
            mj["elt_a"] = m.elt_a;
            mj["elt_b"] = m.elt_b;
            mj["sign"] = rational_to_string(m.sign);
            j["matches"].push_back(mj);
        }
        int degree = 0;
        auto [p2, m2] = glue_from_json(j, degree);
        REQUIRE(degree == 2);
        GlueResult g = glue_assemble(p2, m2, degree);
        CHECK(g.correction_l1 == q(1, 2));
    }
}
