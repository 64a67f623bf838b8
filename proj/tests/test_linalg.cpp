#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "liederiv/linalg.hpp"

using namespace liederiv;

namespace {
Mat random_mat(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
    Mat m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            m(r, c) = make_rat(static_cast<long>(rng() % 19) - 9,
                               static_cast<long>(rng() % 3) + 1);
    return m;
}

Subspace random_subspace(std::mt19937_64& rng, std::size_t ambient, std::size_t gens) {
    std::vector<Vec> rows;
    for (std::size_t g = 0; g < gens; ++g) {
        Vec v(ambient);
        for (auto& x : v) x = Rat(static_cast<long>(rng() % 7) - 3);
        rows.push_back(std::move(v));
    }
    return Subspace(ambient, rows);
}
}  // namespace

TEST_CASE("rref matches pinned examples", "[linalg]") {
    CHECK(rref(Mat{{2, 0}, {0, 0}}) == Mat{{1, 0}, {0, 0}});
    CHECK(rref(Mat::identity(3)) == Mat::identity(3));
    CHECK(rref(Mat{{1, 2}, {2, 4}}) == Mat{{1, 2}, {0, 0}});
}

TEST_CASE("rref is idempotent", "[linalg]") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 50; ++t) {
        const Mat m = random_mat(rng, 1 + rng() % 5, 1 + rng() % 5);
        const Mat r = rref(m);
        CHECK(rref(r) == r);
    }
}

TEST_CASE("kernel matches pinned examples", "[linalg]") {
    CHECK(kernel(Mat::identity(4)).dim() == 0);
    const Subspace k = kernel(Mat{{1, 2}, {2, 4}});
    CHECK(k.dim() == 1);
    CHECK(k == Subspace(2, {{Rat(-2), Rat(1)}}));
    CHECK(k.contains({Rat(-2), Rat(1)}));
}

TEST_CASE("image matches pinned examples", "[linalg]") {
    CHECK(image(Mat(3, 3)).dim() == 0);
    CHECK(image(Mat::identity(5)) == Subspace::full(5));
    const Subspace im = image(Mat{{1, 2}, {2, 4}});
    CHECK(im == Subspace(2, {{Rat(1), Rat(2)}}));
}

TEST_CASE("rank plus nullity equals column count", "[linalg]") {
    std::mt19937_64 rng(22);
    for (int t = 0; t < 50; ++t) {
        const std::size_t rows = 1 + rng() % 6, cols = 1 + rng() % 6;
        const Mat m = random_mat(rng, rows, cols);
        CHECK(rank(m) + kernel(m).dim() == cols);
    }
}

TEST_CASE("subspace membership", "[linalg]") {
    const Subspace s(2, {{Rat(1), Rat(2)}});
    CHECK(s.contains({Rat(0), Rat(0)}));
    CHECK(s.contains({Rat(2), Rat(4)}));
    CHECK_FALSE(s.contains({Rat(1), Rat(0)}));
}

TEST_CASE("subspace canonical equality is representation equality", "[linalg]") {
    // the same plane from different spanning sets gives identical bases
    const Subspace a(3, {{Rat(1), Rat(1), Rat(0)}, {Rat(0), Rat(1), Rat(1)}});
    const Subspace b(3, {{Rat(2), Rat(3), Rat(1)}, {Rat(1), Rat(2), Rat(1)}, {Rat(3), Rat(4), Rat(1)}});
    REQUIRE(a.dim() == 2);
    REQUIRE(b.dim() == 2);
    CHECK(a == b);
    CHECK(a.basis() == b.basis());
}

TEST_CASE("intersect matches pinned examples", "[linalg]") {
    std::mt19937_64 rng(5);
    const Subspace v = random_subspace(rng, 4, 2);
    CHECK(intersect(v, v) == v);
    const Subspace w(3, {{Rat(1), Rat(1), Rat(1)}});
    CHECK(intersect(Subspace::full(3), w) == w);
    const Subspace xy(3, {{Rat(1), Rat(0), Rat(0)}, {Rat(0), Rat(1), Rat(0)}});
    const Subspace yz(3, {{Rat(0), Rat(1), Rat(0)}, {Rat(0), Rat(0), Rat(1)}});
    CHECK(intersect(xy, yz) == Subspace(3, {{Rat(0), Rat(1), Rat(0)}}));
}

TEST_CASE("dimension formula for intersections and joins", "[linalg]") {
    std::mt19937_64 rng(33);
    for (int t = 0; t < 40; ++t) {
        const std::size_t ambient = 2 + rng() % 5;
        const Subspace a = random_subspace(rng, ambient, rng() % (ambient + 1));
        const Subspace b = random_subspace(rng, ambient, rng() % (ambient + 1));
        const Subspace meet = intersect(a, b);
        const Subspace sum = join(a, b);
        CHECK(a.dim() + b.dim() == meet.dim() + sum.dim());
        CHECK(sum.contains(a));
        CHECK(sum.contains(b));
        CHECK(a.contains(meet));
        CHECK(b.contains(meet));
    }
}

TEST_CASE("modular law for nested subspaces", "[linalg]") {
    // A <= C implies A + (B n C) = (A + B) n C
    std::mt19937_64 rng(44);
    for (int t = 0; t < 40; ++t) {
        const std::size_t ambient = 3 + rng() % 4;
        const Subspace c = random_subspace(rng, ambient, rng() % (ambient + 1));
        // carve A out of C by dropping basis rows
        std::vector<Vec> sub;
        for (std::size_t k = 0; k < c.dim(); ++k)
            if (rng() % 2) sub.push_back(c.basis_row(k));
        const Subspace a(ambient, sub);
        const Subspace b = random_subspace(rng, ambient, rng() % (ambient + 1));
        REQUIRE(c.contains(a));
        CHECK(join(a, intersect(b, c)) == intersect(join(a, b), c));
    }
}

TEST_CASE("solve matches pinned examples", "[linalg]") {
    const Vec v{Rat(3), Rat(-1), Rat(7)};
    CHECK(solve(Mat::identity(3), v) == v);

    const Mat m{{1, 2}, {2, 4}};
    const auto pivot = solve(m, {Rat(1), Rat(2)});
    REQUIRE(pivot.has_value());
    CHECK(*pivot == Vec{Rat(1), Rat(0)});  // free variable pinned to zero
    CHECK_FALSE(solve(m, {Rat(1), Rat(0)}).has_value());
}

TEST_CASE("solve solutions are exact and match image membership", "[linalg]") {
    std::mt19937_64 rng(55);
    for (int t = 0; t < 40; ++t) {
        const std::size_t rows = 1 + rng() % 5, cols = 1 + rng() % 5;
        const Mat m = random_mat(rng, rows, cols);
        Vec v(rows);
        for (auto& x : v) x = Rat(static_cast<long>(rng() % 9) - 4);
        const auto x = solve(m, v);
        CHECK(x.has_value() == image(m).contains(v));
        if (x) CHECK(m.apply(*x) == v);
    }
}

TEST_CASE("rref builder reports dependence and keeps canonical rows", "[linalg]") {
    RrefBuilder b(3);
    CHECK(b.insert({Rat(1), Rat(1), Rat(0)}));
    CHECK(b.insert({Rat(0), Rat(1), Rat(1)}));
    CHECK_FALSE(b.insert({Rat(1), Rat(2), Rat(1)}));  // sum of the first two
    CHECK(b.rank() == 2);
    Vec reduced{Rat(1), Rat(2), Rat(1)};
    b.reduce(reduced);
    CHECK(is_zero(reduced));
}

TEST_CASE("annihilator rows cut out exactly the subspace", "[linalg]") {
    std::mt19937_64 rng(66);
    for (int t = 0; t < 20; ++t) {
        const std::size_t ambient = 2 + rng() % 5;
        const Subspace s = random_subspace(rng, ambient, rng() % (ambient + 1));
        const auto ann = s.annihilator_rows();
        CHECK(ann.size() == ambient - s.dim());
        const Subspace back = kernel(Mat::from_rows(ann, ambient));
        CHECK(back == s);
    }
}
