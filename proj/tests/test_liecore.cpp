#include <catch2/catch_amalgamated.hpp>

#include "liederiv/lie_algebra.hpp"
#include "liederiv/schrodinger.hpp"

using namespace liederiv;

namespace {
Vec e_at(std::size_t d, std::size_t i, const Rat& c = Rat(1)) {
    Vec v = zero_vec(d);
    v[i] = c;
    return v;
}
}  // namespace

TEST_CASE("schrodinger dimensions and labels", "[liecore]") {
    CHECK(build_schrodinger(1).dim() == 6);
    CHECK(build_schrodinger(2).dim() == 9);
    CHECK(build_schrodinger(3).dim() == 13);
    CHECK(build_schrodinger(4).dim() == 18);
    CHECK(build_so(4).dim() == 6);
    CHECK(build_so(1).dim() == 0);
    CHECK(build_sl2().dim() == 3);
    CHECK_THROWS_AS(build_schrodinger(0), std::invalid_argument);

    const auto L = build_schrodinger(2);
    CHECK(L.labels() == std::vector<std::string>{"e", "f", "h", "z", "u1", "u2", "v1", "v2", "s1_2"});
}

TEST_CASE("pinned bracket values in s3", "[liecore]") {
    const auto L = build_schrodinger(3);
    const SchrodingerBasis B(3);
    const std::size_t d = L.dim();

    // [h, e] = 2e
    CHECK(L.bracket(e_at(d, B.h), e_at(d, B.e)) == e_at(d, B.e, Rat(2)));
    // [u1, v1] = z
    CHECK(L.bracket(e_at(d, B.u(1)), e_at(d, B.v(1))) == e_at(d, B.z));
    // [s12, u2] = u1
    CHECK(L.bracket(e_at(d, B.s(1, 2)), e_at(d, B.u(2))) == e_at(d, B.u(1)));
    // [s12, s23] = s13
    CHECK(L.bracket(e_at(d, B.s(1, 2)), e_at(d, B.s(2, 3))) == e_at(d, B.s(1, 3)));
    // [s12, s13] = -s23
    CHECK(L.bracket(e_at(d, B.s(1, 2)), e_at(d, B.s(1, 3))) == e_at(d, B.s(2, 3), Rat(-1)));
    // antisymmetry on a mixed element
    Vec x = e_at(d, B.e) + e_at(d, B.u(2));
    CHECK(is_zero(L.bracket(x, x)));
    CHECK(L.bracket(x, e_at(d, B.f)) + L.bracket(e_at(d, B.f), x) == zero_vec(d));
}

TEST_CASE("ad matrices", "[liecore]") {
    const auto L = build_schrodinger(1);
    const SchrodingerBasis B(1);
    const Mat adh = L.ad_basis(B.h);
    // diagonal (2, -2, 0, 0, 1, -1) on (e, f, h, z, u1, v1)
    Mat expect(6, 6);
    expect(0, 0) = 2;
    expect(1, 1) = -2;
    expect(4, 4) = 1;
    expect(5, 5) = -1;
    CHECK(adh == expect);

    CHECK(L.ad(zero_vec(6)).is_zero_mat());
    CHECK(L.ad_basis(B.z).is_zero_mat());
}

TEST_CASE("jacobi holds for the schrodinger family", "[liecore]") {
    for (std::size_t n = 1; n <= 4; ++n)
        CHECK(build_schrodinger(n).jacobi_violations().empty());
    CHECK(build_abelian(4).jacobi_violations().empty());
}

TEST_CASE("jacobi check flags a genuinely failing table", "[liecore]") {
    // [a,b]=c, [a,c]=c, [b,c]=a: cyclic sum [[a,b],c]+[[b,c],a]+[[c,a],b] = a
    LieAlgebra bad("bad", {"a", "b", "c"});
    bad.set_bracket(0, 1, {{2, 1}});
    bad.set_bracket(0, 2, {{2, 1}});
    bad.set_bracket(1, 2, {{0, 1}});
    const auto violations = bad.jacobi_violations();
    REQUIRE(violations.size() == 1);
    CHECK(violations[0] == std::tuple<std::size_t, std::size_t, std::size_t>{0, 1, 2});

    // whereas [a,b]=c, [a,c]=0, [b,c]=a closes (all three cyclic terms vanish)
    LieAlgebra ok("ok", {"a", "b", "c"});
    ok.set_bracket(0, 1, {{2, 1}});
    ok.set_bracket(1, 2, {{0, 1}});
    CHECK(ok.jacobi_violations().empty());
}

TEST_CASE("center computations", "[liecore]") {
    for (std::size_t n = 1; n <= 4; ++n) {
        const auto L = build_schrodinger(n);
        const SchrodingerBasis B(n);
        const Subspace c = L.center();
        CHECK(c.dim() == 1);
        CHECK(c.contains(e_at(L.dim(), B.z)));
    }
    CHECK(build_abelian(5).center() == Subspace::full(5));
    CHECK(build_sl2().center().dim() == 0);
}

TEST_CASE("algebra constructor and bracket setter validate input", "[liecore]") {
    CHECK_THROWS_AS(LieAlgebra("dup", {"x", "x"}), std::invalid_argument);
    LieAlgebra L("t", {"a", "b"});
    CHECK_THROWS_AS(L.set_bracket(0, 0, {{0, 1}}), std::invalid_argument);  // [x,x] != 0
    CHECK_THROWS_AS(L.set_bracket(0, 1, {{5, 1}}), std::out_of_range);      // target index
    L.set_bracket(0, 1, {{0, 2}, {0, -2}});  // terms merge away to zero
    CHECK(L.relations().empty());

    // setting via (j, i) stores the negated (i, j) bracket
    L.set_bracket(1, 0, {{0, 3}});
    CHECK(L.bracket_of_pair(0, 1) == SparseVec{{0, Rat(-3)}});
}

TEST_CASE("direct sums", "[liecore]") {
    const auto g = direct_sum(build_sl2(), build_so(3));
    CHECK(g.dim() == 6);
    // the two summands commute
    CHECK(is_zero(g.bracket(e_at(6, 0), e_at(6, 3))));
    CHECK(is_zero(g.bracket(e_at(6, 2), e_at(6, 5))));
    CHECK(g.jacobi_violations().empty());

    CHECK(direct_sum(build_sl2(), build_sl2()).center().dim() == 0);

    // summing with the zero algebra changes nothing but the name
    const auto L = build_schrodinger(1);
    const auto same = direct_sum(L, build_abelian(0));
    CHECK(same.dim() == L.dim());
    for (const auto& r : L.relations())
        CHECK(same.bracket_of_pair(r.i, r.j) == r.terms);
}

TEST_CASE("colliding labels in direct sums are renamed", "[liecore]") {
    const auto g = direct_sum(build_sl2(), build_sl2());
    const auto& lbl = g.labels();
    REQUIRE(lbl.size() == 6);
    CHECK(lbl[0] == "e");
    CHECK(lbl[3] != "e");
    // all labels pairwise distinct (constructor would have thrown otherwise)
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = i + 1; j < 6; ++j) CHECK(lbl[i] != lbl[j]);
}

TEST_CASE("schrodinger detection", "[liecore]") {
    for (std::size_t n = 1; n <= 4; ++n) {
        const auto B = detect_schrodinger(build_schrodinger(n));
        REQUIRE(B.has_value());
        CHECK(B->n == n);
    }
    CHECK_FALSE(detect_schrodinger(build_abelian(6)).has_value());
    CHECK_FALSE(detect_schrodinger(build_sl2()).has_value());

    // right shape and labels but one wrong constant: rejected
    auto L = build_schrodinger(1);
    LieAlgebra twisted("s1", L.labels());
    for (const auto& r : L.relations()) twisted.set_bracket(r.i, r.j, r.terms);
    const SchrodingerBasis B(1);
    twisted.set_bracket(B.h, B.z, {{B.z, 1}});  // z is central in the real s1
    CHECK_FALSE(detect_schrodinger(twisted).has_value());
}

TEST_CASE("element formatting", "[liecore]") {
    const auto L = build_schrodinger(1);
    const SchrodingerBasis B(1);
    Vec x = zero_vec(6);
    CHECK(format_element(L, x) == "0");
    x[B.f] = 1;
    x[B.z] = Rat(-1, 2);
    x[B.v(1)] = 1;
    CHECK(format_element(L, x) == "f - 1/2 z + v1");
}
