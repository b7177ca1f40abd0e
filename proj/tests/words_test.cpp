#include <catch2/catch_amalgamated.hpp>

#include "gognorm/words.hpp"

using namespace gognorm;

namespace {
GroupSpec f2() { return make_free_group({"a", "b"}); }
GroupElt w(const GroupSpec& s, std::vector<std::pair<int, Integer>> letters) {
    return ge_from_letters(s, letters);
}
}  // namespace

TEST_CASE("free group multiplication reduces fully") {
    GroupSpec s = f2();
    GroupElt ab = w(s, {{0, 1}, {1, 1}});
    GroupElt binva = w(s, {{1, -1}, {0, 1}});
    GroupElt p = ge_mul(s, ab, binva);  // a b b^-1 a = a^2
    CHECK(p == w(s, {{0, 2}}));
    CHECK(ge_mul(s, p, ge_inv(s, p)) == ge_identity(s));
    CHECK(ge_is_identity(ge_mul(s, ab, ge_inv(s, ab))));
}

TEST_CASE("free group powers via cyclic decomposition") {
    GroupSpec s = f2();
    GroupElt g = w(s, {{0, 1}, {1, 1}, {0, -1}});  // a b a^-1
    GroupElt g3 = ge_pow(s, g, 3);
    CHECK(g3 == w(s, {{0, 1}, {1, 3}, {0, -1}}));
    CHECK(ge_pow(s, g, -2) == ge_inv(s, ge_pow(s, g, 2)));
    CHECK(ge_pow(s, w(s, {{0, 1}, {1, 1}}), 3) ==
          w(s, {{0, 1}, {1, 1}, {0, 1}, {1, 1}, {0, 1}, {1, 1}}));
}

TEST_CASE("abelian groups with torsion canonicalize coordinates") {
    GroupSpec s = make_abelian_group({"x", "y"}, {Integer(0), Integer(6)});
    GroupElt g = w(s, {{0, 2}, {1, 5}});
    GroupElt h = w(s, {{1, 7}});  // y^7 = y
    CHECK(ge_mul(s, g, h) == w(s, {{0, 2}}));  // y^5 * y^7 = y^12 = 1
    CHECK(ge_inv(s, h) == w(s, {{1, 5}}));
    CHECK(ge_len(s, h) == 1);
    CHECK(ge_len(s, w(s, {{1, 4}})) == 2);  // y^4 = y^-2, balanced
    CHECK(ge_len(s, w(s, {{1, 3}})) == 3);  // y^3 balanced prefers +3
}

TEST_CASE("shortlex ordering prefers shorter, then earlier generators, then positive") {
    GroupSpec s = f2();
    GroupElt one = ge_identity(s);
    GroupElt a = w(s, {{0, 1}});
    GroupElt ainv = w(s, {{0, -1}});
    GroupElt b = w(s, {{1, 1}});
    GroupElt aa = w(s, {{0, 2}});
    CHECK(ge_less(s, one, a));
    CHECK(ge_less(s, a, ainv));
    CHECK(ge_less(s, ainv, b));
    CHECK(ge_less(s, b, aa));
    CHECK_FALSE(ge_less(s, aa, b));
    GroupElt ab = w(s, {{0, 1}, {1, 1}});
    CHECK(ge_less(s, aa, ab));
    // a^2 vs a b^-1: same length, a < b at second letter
    CHECK(ge_less(s, aa, w(s, {{0, 1}, {1, -1}})));
    // a b vs a^-1 anything: positive a first
    CHECK(ge_less(s, ab, w(s, {{0, -1}, {1, 1}})));
}

TEST_CASE("ball enumeration counts match free and abelian growth") {
    GroupSpec s = f2();
    auto b2 = ge_ball(s, 2);
    // reduced words of length <= 2 in F2: 1 + 4 + 12 = 17
    CHECK(b2.size() == 17);

    GroupSpec z = make_abelian_group({"t"}, {Integer(0)});
    CHECK(ge_ball(z, 3).size() == 7);

    GroupSpec z4 = make_abelian_group({"u"}, {Integer(4)});
    // balanced exponents -1, 0, 1, 2
    CHECK(ge_ball(z4, 5).size() == 4);
}

TEST_CASE("primitive roots and discrete logs in free groups") {
    GroupSpec s = f2();
    GroupElt g = w(s, {{0, 1}, {1, 2}, {0, 1}, {1, 2}, {0, 1}, {1, 2}});  // (a b^2)^3
    auto [r, m] = ge_primitive_root(s, g);
    CHECK(r == w(s, {{0, 1}, {1, 2}}));
    CHECK(m == 3);

    GroupElt c = w(s, {{0, 1}, {1, 1}, {0, -1}});  // a b a^-1 primitive
    auto [rc, mc] = ge_primitive_root(s, c);
    CHECK(mc == 1);
    CHECK(rc == c);

    auto [rx, mx] = ge_primitive_root(s, w(s, {{0, -6}}));
    CHECK(mx == 6);
    CHECK(rx == w(s, {{0, -1}}));

    GroupElt base = w(s, {{0, 1}, {1, 2}});
    CHECK(ge_dlog(s, ge_pow(s, base, 5), base) == Integer(5));
    CHECK(ge_dlog(s, ge_pow(s, base, -4), base) == Integer(-4));
    CHECK_FALSE(ge_dlog(s, w(s, {{0, 1}}), base).has_value());
    CHECK_FALSE(ge_dlog(s, ge_mul(s, ge_pow(s, base, 2), w(s, {{0, 1}})), base).has_value());
}

TEST_CASE("subgroup image in a free group: membership, preimage, coset reps") {
    // edge group Z = <t>, image <a^2> in F2
    GroupSpec v = f2();
    GroupSpec e = make_abelian_group({"t"}, {Integer(0)});
    SubgroupImage im(v, e, {w(v, {{0, 2}})});
    REQUIRE(im.valid());
    CHECK_FALSE(im.trivial_image());
    CHECK(im.contains(w(v, {{0, 4}})));
    CHECK(im.contains(w(v, {{0, -6}})));
    CHECK_FALSE(im.contains(w(v, {{0, 3}})));
    CHECK_FALSE(im.contains(w(v, {{1, 2}})));
    CHECK(im.preimage(w(v, {{0, -6}})) == IVec{-3});
    CHECK(im.image_of(IVec{2}) == w(v, {{0, 4}}));

    // coset reps: a^3 <a^2> has shortlex-min a; b a^2 <a^2> shrinks to b;
    // a^2 b <a^2> only grows rightward, so it is its own minimum
    CHECK(im.coset_rep(w(v, {{0, 3}})) == w(v, {{0, 1}}));
    CHECK(im.coset_rep(w(v, {{1, 1}, {0, 2}})) == w(v, {{1, 1}}));
    CHECK(im.coset_rep(w(v, {{0, 2}, {1, 1}})) == w(v, {{0, 2}, {1, 1}}));
    CHECK(im.coset_rep(w(v, {{0, 2}})) == ge_identity(v));
    CHECK(im.same_coset(w(v, {{0, 3}}), w(v, {{0, -1}})));
    CHECK_FALSE(im.same_coset(w(v, {{0, 3}}), w(v, {{0, 2}})));

    auto reps = im.coset_reps_within(1);
    // cosets with a representative of length <= 1: 1, a, b, b^-1
    REQUIRE(reps.size() == 4);
    CHECK(reps[0] == ge_identity(v));
    CHECK(reps[1] == w(v, {{0, 1}}));
}

TEST_CASE("subgroup image rejects maps that are not monomorphisms") {
    GroupSpec v = f2();
    GroupSpec z = make_abelian_group({"t"}, {Integer(0)});
    GroupSpec z2 = make_abelian_group({"t", "u"}, {Integer(0), Integer(0)});
    GroupSpec z4 = make_abelian_group({"t"}, {Integer(4)});

    CHECK_FALSE(SubgroupImage(v, z, {ge_identity(v)}).valid());
    CHECK_FALSE(SubgroupImage(v, z2, {w(v, {{0, 2}}), w(v, {{0, 3}})}).valid());
    CHECK_FALSE(SubgroupImage(v, z4, {w(v, {{0, 1}})}).valid());

    // trivial edge group into anything is fine
    GroupSpec triv = make_abelian_group({}, {});
    CHECK(SubgroupImage(v, triv, {}).valid());
    CHECK(SubgroupImage(v, triv, {}).trivial_image());

    // abelian target: Z/2 -> Z/4 by t -> u^2 is well-defined and injective,
    // t -> u^1 is not well-defined, Z/2 -> Z/8 by t -> u^2 has kernel... no:
    // 2*(2) = 4 != 0 mod 8, not well-defined.
    GroupSpec t4 = make_abelian_group({"u"}, {Integer(4)});
    GroupSpec e2 = make_abelian_group({"t"}, {Integer(2)});
    CHECK(SubgroupImage(t4, e2, {ge_from_letters(t4, {{0, 2}})}).valid());
    CHECK_FALSE(SubgroupImage(t4, e2, {ge_from_letters(t4, {{0, 1}})}).valid());
    GroupSpec t8 = make_abelian_group({"u"}, {Integer(8)});
    CHECK_FALSE(SubgroupImage(t8, e2, {ge_from_letters(t8, {{0, 2}})}).valid());
    CHECK(SubgroupImage(t8, e2, {ge_from_letters(t8, {{0, 4}})}).valid());
}

TEST_CASE("subgroup image in an abelian group: cosets and reps") {
    // V = Z^2, image of Z via (2, 4)
    GroupSpec v = make_abelian_group({"x", "y"}, {Integer(0), Integer(0)});
    GroupSpec e = make_abelian_group({"t"}, {Integer(0)});
    SubgroupImage im(v, e, {ge_from_letters(v, {{0, 2}, {1, 4}})});
    REQUIRE(im.valid());
    CHECK(im.contains(ge_from_letters(v, {{0, -4}, {1, -8}})));
    CHECK_FALSE(im.contains(ge_from_letters(v, {{0, 2}, {1, 3}})));
    CHECK(im.preimage(ge_from_letters(v, {{0, 6}, {1, 12}})) == IVec{3});

    // coset of (3, 4): min rep (1, 0) via subtracting (2, 4)
    CHECK(im.coset_rep(ge_from_letters(v, {{0, 3}, {1, 4}})) == ge_from_letters(v, {{0, 1}}));
    CHECK(im.same_coset(ge_from_letters(v, {{0, 3}, {1, 4}}), ge_from_letters(v, {{0, 1}})));

    // Z/6 target, image of Z/3 via u^2: cosets {0,2,4}, {1,3,5};
    // min reps 1 (identity) and u
    GroupSpec z6 = make_abelian_group({"u"}, {Integer(6)});
    GroupSpec e3 = make_abelian_group({"t"}, {Integer(3)});
    SubgroupImage im6(z6, e3, {ge_from_letters(z6, {{0, 2}})});
    REQUIRE(im6.valid());
    CHECK(im6.coset_rep(ge_from_letters(z6, {{0, 4}})) == ge_identity(z6));
    CHECK(im6.coset_rep(ge_from_letters(z6, {{0, 3}})) == ge_from_letters(z6, {{0, 1}}));
    CHECK(im6.preimage(ge_from_letters(z6, {{0, 4}})) == IVec{2});
}
