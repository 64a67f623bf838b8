// Normalization replay: stage-by-stage decomposition traces, lemma verdicts,
// failure reporting, and the exact reassembly identity.
#include <catch2/catch_amalgamated.hpp>

#include <random>

#include <liederiv/derivations.hpp>
#include <liederiv/proof_replay.hpp>
#include <liederiv/schrodinger.hpp>

using namespace liederiv;

namespace {

Vec unit_vec(std::size_t d, std::size_t i) {
    Vec x(d, Rat(0));
    x[i] = Rat(1);
    return x;
}

void check_reassembly(const LieAlgebra& L, const ProofTrace& trace) {
    CHECK(reassemble(L, trace) == trace.input);
}

const LemmaVerdict& lemma_by_id(const ProofTrace& trace, const std::string& id) {
    for (const LemmaVerdict& lv : trace.lemmas)
        if (lv.id == id) return lv;
    FAIL("missing lemma " << id);
    throw std::logic_error("unreachable");
}

}  // namespace

TEST_CASE("replay decomposes an inner derivation", "[replay]") {
    const LieAlgebra L = build_schrodinger(3);
    const DerSpace ds = derivation_space(L);
    const SchrodingerBasis B = *detect_schrodinger(L);

    const LinearMap delta = LinearMap(L.ad(unit_vec(13, B.e)));
    const ProofTrace trace = replay(L, ds, delta);

    CHECK(trace.pattern_ok);
    CHECK_FALSE(trace.failure.has_value());
    CHECK(trace.decomposition_valid);
    CHECK(trace.residual.is_zero_map());
    REQUIRE(trace.stage1_subtrahend.has_value());
    CHECK(is_derivation(L, *trace.stage1_subtrahend).ok);
    CHECK(*trace.delta_prime == delta - *trace.stage1_subtrahend);
    for (const LemmaVerdict& lv : trace.lemmas) CHECK(lv.pass);
    check_reassembly(L, trace);
}

TEST_CASE("replay isolates the scaling part", "[replay]") {
    const LieAlgebra L = build_schrodinger(3);
    const DerSpace ds = derivation_space(L);
    const ProofTrace trace = replay(L, ds, sigma(3));

    CHECK(trace.decomposition_valid);
    REQUIRE(trace.x0.has_value());
    CHECK(*trace.x0 == Vec(13, Rat(0)));
    CHECK(trace.lambda == Rat(1));
    CHECK(trace.tau_coeff == Rat(0));
    CHECK(trace.stage1_subtrahend->is_zero_map());
    check_reassembly(L, trace);
}

TEST_CASE("replay recovers inner element and scaling coefficient together", "[replay]") {
    const LieAlgebra L = build_schrodinger(3);
    const DerSpace ds = derivation_space(L);
    const SchrodingerBasis B = *detect_schrodinger(L);

    const LinearMap delta =
        Rat(3) * LinearMap(L.ad(unit_vec(13, B.u(1)))) + Rat(2) * sigma(3);
    const ProofTrace trace = replay(L, ds, delta);

    CHECK(trace.decomposition_valid);
    REQUIRE(trace.x0.has_value());
    CHECK(*trace.x0 == [&] {
        Vec x(13, Rat(0));
        x[B.u(1)] = Rat(3);
        return x;
    }());
    CHECK(trace.lambda == Rat(2));
    check_reassembly(L, trace);
}

TEST_CASE("replay handles the n = 2 rotation and tau parts", "[replay]") {
    const LieAlgebra L = build_schrodinger(2);
    const DerSpace ds = derivation_space(L);
    const SchrodingerBasis B = *detect_schrodinger(L);

    SECTION("pure tau") {
        const ProofTrace trace = replay(L, ds, tau());
        CHECK(trace.decomposition_valid);
        CHECK(*trace.x0 == Vec(9, Rat(0)));
        CHECK(trace.lambda == Rat(0));
        CHECK(trace.tau_coeff == Rat(1));
        check_reassembly(L, trace);
    }

    SECTION("inner rotation generator") {
        const ProofTrace trace = replay(L, ds, LinearMap(L.ad(unit_vec(9, B.s(1, 2)))));
        CHECK(trace.decomposition_valid);
        CHECK(*trace.x0 == unit_vec(9, B.s(1, 2)));
        CHECK(trace.lambda == Rat(0));
        CHECK(trace.tau_coeff == Rat(0));
        check_reassembly(L, trace);
    }

    SECTION("mixed combination") {
        const LinearMap delta = Rat(2) * LinearMap(L.ad(unit_vec(9, B.s(1, 2)))) +
                                Rat(5) * tau() + sigma(2);
        const ProofTrace trace = replay(L, ds, delta);
        CHECK(trace.decomposition_valid);
        Vec expect(9, Rat(0));
        expect[B.s(1, 2)] = Rat(2);
        CHECK(*trace.x0 == expect);
        CHECK(trace.lambda == Rat(1));
        CHECK(trace.tau_coeff == Rat(5));
        check_reassembly(L, trace);
    }
}

TEST_CASE("replay marks the central cross map as a stage-2 failure", "[replay]") {
    const LieAlgebra L = build_schrodinger(3);
    const DerSpace ds = derivation_space(L);
    const SchrodingerBasis B = *detect_schrodinger(L);

    const LinearMap bad = LinearMap::unit(13, B.u(1), B.z);  // z -> u1
    const ProofTrace trace = replay(L, ds, bad);

    CHECK(trace.pattern_ok);
    CHECK_FALSE(trace.decomposition_valid);
    REQUIRE(trace.failure.has_value());
    CHECK(trace.failure->stage == "stage2");
    CHECK(trace.failure->message == "image of z has components outside span{z}");
    CHECK(trace.lemmas.empty());
    CHECK_FALSE(trace.residual.is_zero_map());
    check_reassembly(L, trace);
}

TEST_CASE("replay fails the identity map at stage 1", "[replay]") {
    const LieAlgebra L = build_schrodinger(3);
    const DerSpace ds = derivation_space(L);
    const ProofTrace trace = replay(L, ds, LinearMap::identity(13));

    CHECK(trace.pattern_ok);  // diagonal entries sit in permitted blocks
    REQUIRE(trace.failure.has_value());
    CHECK(trace.failure->stage == "stage1");
    CHECK_FALSE(trace.stage1_subtrahend.has_value());
    CHECK_FALSE(trace.decomposition_valid);
    CHECK(trace.residual == trace.input);
    check_reassembly(L, trace);
}

TEST_CASE("replay rejects a forbidden block at the pattern stage", "[replay]") {
    const LieAlgebra L = build_schrodinger(3);
    const DerSpace ds = derivation_space(L);
    const SchrodingerBasis B = *detect_schrodinger(L);

    const LinearMap bad = LinearMap::unit(13, B.s(1, 2), B.e);  // e -> s1_2
    const ProofTrace trace = replay(L, ds, bad);

    CHECK_FALSE(trace.pattern_ok);
    REQUIRE(trace.failure.has_value());
    CHECK(trace.failure->stage == "pattern");
    CHECK_FALSE(trace.stage1_subtrahend.has_value());
    CHECK(trace.lemmas.empty());
    CHECK(trace.residual == trace.input);
    check_reassembly(L, trace);
}

TEST_CASE("a lemma failure names the offending coefficient", "[replay]") {
    const LieAlgebra L = build_schrodinger(3);
    const DerSpace ds = derivation_space(L);
    const SchrodingerBasis B = *detect_schrodinger(L);

    const LinearMap bad = LinearMap::unit(13, B.v(1), B.f);  // f -> v1
    const ProofTrace trace = replay(L, ds, bad);

    CHECK(trace.pattern_ok);
    CHECK_FALSE(trace.failure.has_value());  // stages pass; a lemma catches it
    CHECK_FALSE(trace.decomposition_valid);
    CHECK(trace.residual == *trace.delta_dprime);
    CHECK_FALSE(trace.residual.is_zero_map());

    const LemmaVerdict& fcol = lemma_by_id(trace, "f-column");
    CHECK_FALSE(fcol.pass);
    bool found = false;
    for (const CoeffCheck& c : fcol.coefficients) {
        if (c.name == "a_u1^(f)") {
            found = true;
            CHECK(c.value == Rat(-1));
            CHECK_FALSE(c.zero);
        }
    }
    CHECK(found);
    bool f_conclusion_checked = false;
    for (const Conclusion& c : fcol.conclusions) {
        if (c.statement == "column f vanishes") {
            f_conclusion_checked = true;
            CHECK_FALSE(c.ok);
        }
    }
    CHECK(f_conclusion_checked);

    CHECK(lemma_by_id(trace, "cross").pass);
    CHECK(lemma_by_id(trace, "central").pass);
    CHECK(lemma_by_id(trace, "e-column").pass);
    CHECK(lemma_by_id(trace, "rotation").pass);
    check_reassembly(L, trace);
}

TEST_CASE("lemma roster depends on the rotation part", "[replay]") {
    for (std::size_t n = 1; n <= 3; ++n) {
        const LieAlgebra L = build_schrodinger(n);
        const DerSpace ds = derivation_space(L);
        const ProofTrace trace = replay(L, ds, named_outer_derivations(n).front());
        std::vector<std::string> ids;
        for (const LemmaVerdict& lv : trace.lemmas) ids.push_back(lv.id);
        if (n == 1)
            CHECK(ids == std::vector<std::string>{"cross", "central", "f-column", "e-column"});
        else
            CHECK(ids == std::vector<std::string>{"cross", "central", "f-column", "e-column",
                                                  "rotation"});
    }
}

TEST_CASE("every derivation basis element replays cleanly", "[replay]") {
    for (std::size_t n = 1; n <= 4; ++n) {
        const LieAlgebra L = build_schrodinger(n);
        const DerSpace ds = derivation_space(L);
        INFO("n = " << n);
        for (std::size_t k = 0; k < ds.space.dim(); ++k) {
            const LinearMap delta = LinearMap::from_vec(L.dim(), ds.space.basis_row(k));
            const ProofTrace trace = replay(L, ds, delta);
            CHECK(trace.decomposition_valid);
            CHECK(trace.residual.is_zero_map());
            for (const LemmaVerdict& lv : trace.lemmas) CHECK(lv.pass);
            check_reassembly(L, trace);
        }
    }
}

TEST_CASE("seeded random derivations replay cleanly", "[replay]") {
    const LieAlgebra L = build_schrodinger(3);
    const DerSpace ds = derivation_space(L);
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> dist(-5, 5);
    for (int trial = 0; trial < 20; ++trial) {
        Vec flat(169, Rat(0));
        for (std::size_t k = 0; k < ds.space.dim(); ++k) {
            const Rat c(dist(rng));
            if (is_zero(c)) continue;
            const Vec row = ds.space.basis_row(k);
            for (std::size_t idx = 0; idx < flat.size(); ++idx) flat[idx] += c * row[idx];
        }
        const ProofTrace trace = replay(L, ds, LinearMap::from_vec(13, flat));
        CHECK(trace.decomposition_valid);
        check_reassembly(L, trace);
    }
}

TEST_CASE("replay validates its inputs", "[replay]") {
    const LieAlgebra sl2 = build_sl2();
    const DerSpace ds_sl2 = derivation_space(sl2);
    CHECK_THROWS_AS(replay(sl2, ds_sl2, LinearMap::zero(3)), std::invalid_argument);

    const LieAlgebra L = build_schrodinger(3);
    const DerSpace ds = derivation_space(L);
    CHECK_THROWS_AS(replay(L, ds, LinearMap::zero(6)), std::invalid_argument);
}
