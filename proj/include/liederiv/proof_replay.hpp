#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "liederiv/derivations.hpp"
#include "liederiv/lie_algebra.hpp"
#include "liederiv/linalg.hpp"
#include "liederiv/linear_map.hpp"
#include "liederiv/local_derivations.hpp"
#include "liederiv/schrodinger.hpp"

namespace liederiv {

/// One forced-vanishing check inside a lemma replay.
struct CoeffCheck {
    std::string name;  // coefficient in a-notation, e.g. "a_f^(u1)"
    Rat value;
    bool zero = false;
};

/// One locality check: is delta''(x) realizable as D(x) for a derivation D?
struct LocalityCheck {
    std::string element;
    bool ok = false;
};

/// One named conclusion a lemma asserts about the normalized map.
struct Conclusion {
    std::string statement;
    bool ok = false;
};

struct LemmaVerdict {
    std::string id;
    std::vector<LocalityCheck> locality;
    std::vector<CoeffCheck> coefficients;
    std::vector<Conclusion> conclusions;
    bool pass = false;

    void finalize() {
        pass = true;
        for (const auto& l : locality) pass = pass && l.ok;
        for (const auto& c : coefficients) pass = pass && c.zero;
        for (const auto& c : conclusions) pass = pass && c.ok;
    }
};

struct StageFailure {
    std::string stage;  // "pattern", "stage1" or "stage2"
    std::string message;
};

/// Full record of one normalization replay. The reassembly identity
///   input = stage1_subtrahend + ad(x0) + lambda * scaling + tau_coeff * tau
///           + residual
/// holds exactly for every trace, including failed ones (absent parts are
/// zero); decomposition_valid is true exactly when the residual vanishes.
struct ProofTrace {
    std::string algebra;
    std::size_t n = 0;
    LinearMap input;
    bool pattern_ok = false;
    std::optional<LinearMap> stage1_subtrahend;
    std::optional<LinearMap> delta_prime;
    std::optional<Vec> x0;
    Rat lambda = Rat(0);
    Rat tau_coeff = Rat(0);
    std::optional<LinearMap> delta_dprime;
    std::vector<LemmaVerdict> lemmas;
    LinearMap residual;
    bool decomposition_valid = false;
    std::optional<StageFailure> failure;
};

/// Recompute stage1_subtrahend + ad(x0) + lambda*scaling + tau_coeff*tau +
/// residual; tests compare this against trace.input.
inline LinearMap reassemble(const LieAlgebra& L, const ProofTrace& trace) {
    const std::size_t d = L.dim();
    LinearMap sum = LinearMap::zero(d);
    if (trace.stage1_subtrahend) sum += *trace.stage1_subtrahend;
    if (trace.x0) sum += LinearMap(L.ad(*trace.x0));
    if (!is_zero(trace.lambda)) {
        const SchrodingerBasis B(trace.n);
        sum += trace.lambda * heisenberg_scaling(B);
    }
    if (!is_zero(trace.tau_coeff)) sum += trace.tau_coeff * tau();
    sum += trace.residual;
    return sum;
}

/// Stage 1: subtract a derivation whose (e,f,h) and rotation corner blocks
/// match the input's. Returns the subtrahend or nullopt when no derivation
/// matches (then the input is not a local derivation).
inline std::optional<LinearMap> normalize_stage1(const LieAlgebra& L, const DerSpace& der,
                                                 const LinearMap& delta,
                                                 const SchrodingerBasis& B) {
    const std::size_t d = L.dim();
    const BlockPartition part = BlockPartition::schrodinger(B);
    std::vector<std::pair<std::size_t, std::size_t>> corner_entries;
    for (std::size_t r = 0; r < part.sizes[0]; ++r)
        for (std::size_t c = 0; c < part.sizes[0]; ++c) corner_entries.emplace_back(r, c);
    for (std::size_t r = 0; r < part.sizes[2]; ++r)
        for (std::size_t c = 0; c < part.sizes[2]; ++c)
            corner_entries.emplace_back(part.offsets[2] + r, part.offsets[2] + c);

    Mat a(corner_entries.size(), der.space.dim());
    Vec rhs(corner_entries.size());
    for (std::size_t q = 0; q < corner_entries.size(); ++q) {
        const auto [r, c] = corner_entries[q];
        for (std::size_t t = 0; t < der.space.dim(); ++t)
            a(q, t) = der.space.basis()(t, r * d + c);
        rhs[q] = delta.m(r, c);
    }
    const auto coeffs = solve(a, rhs);
    if (!coeffs) return std::nullopt;
    LinearMap sub = LinearMap::zero(d);
    for (std::size_t t = 0; t < der.space.dim(); ++t)
        if (!is_zero((*coeffs)[t]))
            sub += (*coeffs)[t] * LinearMap::from_vec(d, der.space.basis_row(t));
    return sub;
}

/// Stage 2 result: the inner point x0, the scaling coefficient, and (n = 2
/// only) the tau coefficient, such that subtracting ad(x0) + lambda*scaling +
/// mu*tau annihilates the h and z columns.
struct Stage2Data {
    Vec x0;
    Rat lambda;
    Rat tau_coeff;
};

/// Stage 2 preconditions on delta': column h supported on span{u,v}, column z
/// on span{z}. Returns an explanation when violated.
inline std::optional<std::string> stage2_precondition_violation(const LinearMap& dp,
                                                                const SchrodingerBasis& B) {
    const std::size_t d = B.dim();
    std::vector<bool> uv(d, false);
    for (std::size_t i = 1; i <= B.n; ++i) uv[B.u(i)] = uv[B.v(i)] = true;
    for (std::size_t r = 0; r < d; ++r)
        if (!uv[r] && !is_zero(dp.m(r, B.h)))
            return "image of h has components outside span{u,v}";
    for (std::size_t r = 0; r < d; ++r)
        if (r != B.z && !is_zero(dp.m(r, B.z)))
            return "image of z has components outside span{z}";
    return std::nullopt;
}

/// Read x0, lambda and the tau coefficient off delta' (preconditions assumed
/// checked). For n = 2 the rotation part of x0 is read from entry (u1, u2):
/// the only stage-2 generator contributing there is ad(s1_2).
inline Stage2Data normalize_stage2(const LinearMap& dp, const SchrodingerBasis& B) {
    Stage2Data out;
    out.x0 = zero_vec(B.dim());
    for (std::size_t i = 1; i <= B.n; ++i) {
        out.x0[B.u(i)] = -dp.m(B.u(i), B.h);
        out.x0[B.v(i)] = dp.m(B.v(i), B.h);
    }
    out.lambda = dp.m(B.z, B.z);
    out.tau_coeff = 0;
    if (B.n == 2) {
        out.x0[B.s(1, 2)] = dp.m(B.u(1), B.u(2));
        out.tau_coeff = dp.m(B.z, B.s(1, 2));
    }
    return out;
}

namespace detail {

inline std::string coeff_name(const std::string& sub, const std::string& sup) {
    return "a_" + sub + "^(" + sup + ")";
}

/// Lemma verdicts for the fully normalized map. Each lemma records its
/// locality test elements, the coefficients it forces to vanish, and its
/// concluding column statements.
inline std::vector<LemmaVerdict> lemma_verdicts(const LieAlgebra& L, const DerSpace& der,
                                                const LinearMap& dd, const SchrodingerBasis& B) {
    const std::size_t d = L.dim();
    auto local = [&](const Vec& x) {
        return LocalityCheck{format_element(L, x), certify_at(L, der, dd, x).has_value()};
    };
    auto elem = [&](std::initializer_list<std::pair<std::size_t, Rat>> terms) {
        Vec x = zero_vec(d);
        for (const auto& [idx, c] : terms) x[idx] += c;
        return x;
    };
    auto lbl = [&](std::size_t i) { return L.label(i); };
    const Rat half(1, 2);

    std::vector<LemmaVerdict> out;

    {
        LemmaVerdict lv;
        lv.id = "cross";
        for (std::size_t i = 1; i <= B.n; ++i) {
            lv.locality.push_back(local(elem({{B.e, 1}, {B.u(i), 1}})));
            lv.locality.push_back(local(elem({{B.f, 1}, {B.v(i), 1}})));
            const Rat af = dd.m(B.v(i), B.u(i));
            const Rat ae = dd.m(B.u(i), B.v(i));
            lv.coefficients.push_back({coeff_name("f", lbl(B.u(i))), af, is_zero(af)});
            lv.coefficients.push_back({coeff_name("e", lbl(B.v(i))), ae, is_zero(ae)});
        }
        lv.finalize();
        out.push_back(std::move(lv));
    }
    {
        LemmaVerdict lv;
        lv.id = "central";
        for (std::size_t i = 1; i <= B.n; ++i) {
            lv.locality.push_back(local(elem({{B.h, 1}, {B.u(i), 1}})));
            lv.locality.push_back(local(elem({{B.h, 1}, {B.v(i), 1}})));
            const Rat au = -dd.m(B.z, B.u(i));
            const Rat av = dd.m(B.z, B.v(i));
            lv.coefficients.push_back({coeff_name(lbl(B.v(i)), lbl(B.u(i))), au, is_zero(au)});
            lv.coefficients.push_back({coeff_name(lbl(B.u(i)), lbl(B.v(i))), av, is_zero(av)});
        }
        lv.finalize();
        out.push_back(std::move(lv));
    }
    {
        LemmaVerdict lv;
        lv.id = "f-column";
        for (std::size_t i = 1; i <= B.n; ++i) {
            lv.locality.push_back(local(elem({{B.f, 1}, {B.z, -half}, {B.v(i), 1}})));
            lv.locality.push_back(local(elem({{B.f, 1}, {B.z, -half}, {B.v(i), -1}})));
            const Rat au = -dd.m(B.v(i), B.f);
            const Rat diag = -dd.m(B.v(i), B.v(i));
            lv.coefficients.push_back({coeff_name(lbl(B.u(i)), "f"), au, is_zero(au)});
            lv.coefficients.push_back(
                {coeff_name("h", lbl(B.v(i))) + "-lambda^(" + lbl(B.v(i)) + ")/2", diag,
                 is_zero(diag)});
        }
        lv.conclusions.push_back({"column f vanishes", is_zero(dd.column(B.f))});
        lv.finalize();
        out.push_back(std::move(lv));
    }
    {
        LemmaVerdict lv;
        lv.id = "e-column";
        for (std::size_t i = 1; i <= B.n; ++i) {
            lv.locality.push_back(local(elem({{B.e, 1}, {B.z, half}, {B.u(i), 1}})));
            lv.locality.push_back(local(elem({{B.e, 1}, {B.z, half}, {B.u(i), -1}})));
            const Rat av = -dd.m(B.u(i), B.e);
            const Rat diag = dd.m(B.u(i), B.u(i));
            lv.coefficients.push_back({coeff_name(lbl(B.v(i)), "e"), av, is_zero(av)});
            lv.coefficients.push_back(
                {coeff_name("h", lbl(B.u(i))) + "+lambda^(" + lbl(B.u(i)) + ")/2", diag,
                 is_zero(diag)});
        }
        lv.conclusions.push_back({"column e vanishes", is_zero(dd.column(B.e))});
        lv.finalize();
        out.push_back(std::move(lv));
    }
    if (B.n >= 2) {
        LemmaVerdict lv;
        lv.id = "rotation";
        for (std::size_t k = 1; k <= B.n; ++k)
            for (std::size_t l = 1; l <= B.n; ++l) {
                if (k == l) continue;
                const auto [sidx, sg] = B.s_signed(k, l);
                lv.locality.push_back(local(elem({{B.u(k), 1}, {sidx, Rat(sg)}})));
                lv.locality.push_back(local(elem({{B.v(k), 1}, {sidx, Rat(sg)}})));
            }
        for (std::size_t k = 1; k <= B.n; ++k)
            for (std::size_t l = k + 1; l <= B.n; ++l) {
                const std::size_t sc = B.s(k, l);
                const Rat auk = dd.m(B.u(l), sc), aul = -dd.m(B.u(k), sc);
                const Rat avk = dd.m(B.v(l), sc), avl = -dd.m(B.v(k), sc);
                lv.coefficients.push_back({coeff_name(lbl(B.u(k)), lbl(sc)), auk, is_zero(auk)});
                lv.coefficients.push_back({coeff_name(lbl(B.u(l)), lbl(sc)), aul, is_zero(aul)});
                lv.coefficients.push_back({coeff_name(lbl(B.v(k)), lbl(sc)), avk, is_zero(avk)});
                lv.coefficients.push_back({coeff_name(lbl(B.v(l)), lbl(sc)), avl, is_zero(avl)});
            }
        // Rotation couplings inside the u and v columns.
        for (std::size_t i = 1; i <= B.n; ++i)
            for (std::size_t j = 1; j <= B.n; ++j) {
                if (i == j) continue;
                const auto [sidx, sg] = B.s_signed(j, i);
                const Rat cu = Rat(sg) * dd.m(B.u(j), B.u(i));
                const Rat cv = Rat(sg) * dd.m(B.v(j), B.v(i));
                lv.coefficients.push_back({coeff_name(lbl(sidx), lbl(B.u(i))), cu, is_zero(cu)});
                lv.coefficients.push_back({coeff_name(lbl(sidx), lbl(B.v(i))), cv, is_zero(cv)});
            }
        bool s_cols = true;
        for (std::size_t k = 1; k <= B.n; ++k)
            for (std::size_t l = k + 1; l <= B.n; ++l)
                s_cols = s_cols && is_zero(dd.column(B.s(k, l)));
        bool uv_cols = true;
        for (std::size_t i = 1; i <= B.n; ++i)
            uv_cols = uv_cols && is_zero(dd.column(B.u(i))) && is_zero(dd.column(B.v(i)));
        lv.conclusions.push_back({"rotation columns vanish", s_cols});
        lv.conclusions.push_back({"heisenberg columns vanish", uv_cols});
        lv.finalize();
        out.push_back(std::move(lv));
    }
    return out;
}

}  // namespace detail

/// Replay the normalization pipeline on delta over the Schrödinger algebra L:
/// match the corner blocks with a derivation, strip the inner part read off the
/// h column and the scaling read off the z column (plus the tau part for
/// n = 2), then run the lemma checks on what remains. The residual is what the
/// pipeline could not account for; it vanishes exactly when delta was a
/// derivation assembled from those parts.
inline ProofTrace replay(const LieAlgebra& L, const DerSpace& der, const LinearMap& delta) {
    auto B = detect_schrodinger(L);
    if (!B) throw std::invalid_argument("replay requires a Schrödinger algebra s_n");
    const std::size_t d = L.dim();
    if (delta.dim() != d) throw std::invalid_argument("map dimension mismatch");

    ProofTrace trace;
    trace.algebra = L.name();
    trace.n = B->n;
    trace.input = delta;
    trace.residual = delta;

    const BlockPartition part = BlockPartition::schrodinger(*B);
    trace.pattern_ok = matches_zero_pattern(delta.m, part, derivation_zero_blocks());
    if (!trace.pattern_ok) {
        trace.failure = StageFailure{"pattern", "input violates the derivation block pattern"};
        return trace;
    }

    const auto sub = normalize_stage1(L, der, delta, *B);
    if (!sub) {
        trace.failure =
            StageFailure{"stage1", "corner blocks are not the corner blocks of any derivation"};
        return trace;
    }
    trace.stage1_subtrahend = *sub;
    trace.delta_prime = delta - *sub;
    trace.residual = *trace.delta_prime;

    if (auto why = stage2_precondition_violation(*trace.delta_prime, *B)) {
        trace.failure = StageFailure{"stage2", *why};
        return trace;
    }
    const Stage2Data s2 = normalize_stage2(*trace.delta_prime, *B);
    trace.x0 = s2.x0;
    trace.lambda = s2.lambda;
    trace.tau_coeff = s2.tau_coeff;

    LinearMap dd = *trace.delta_prime;
    dd -= LinearMap(L.ad(s2.x0));
    if (!is_zero(s2.lambda)) dd -= s2.lambda * heisenberg_scaling(*B);
    if (!is_zero(s2.tau_coeff)) dd -= s2.tau_coeff * tau();
    trace.delta_dprime = dd;
    trace.residual = dd;

    if (!is_zero(dd.column(B->h)) || !is_zero(dd.column(B->z)))
        throw std::logic_error("stage 2 failed to annihilate the h and z columns");

    trace.lemmas = detail::lemma_verdicts(L, der, dd, *B);
    trace.decomposition_valid = dd.is_zero_map();
    return trace;
}

}  // namespace liederiv
