#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "liederiv/derivations.hpp"
#include "liederiv/lie_algebra.hpp"
#include "liederiv/linalg.hpp"
#include "liederiv/linear_map.hpp"
#include "liederiv/schrodinger.hpp"

namespace liederiv {

/// Orbit of a point under a space of maps: span { D(x) : D in der.space }.
inline Subspace derivation_orbit(const LieAlgebra& L, const DerSpace& der, const Vec& x) {
    const std::size_t d = L.dim();
    if (x.size() != d) throw std::invalid_argument("point dimension mismatch");
    std::vector<Vec> images;
    images.reserve(der.space.dim());
    for (std::size_t k = 0; k < der.space.dim(); ++k) {
        const Vec flat = der.space.basis_row(k);
        Vec y = zero_vec(d);
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c)
                if (!is_zero(flat[r * d + c]) && !is_zero(x[c])) y[r] += flat[r * d + c] * x[c];
        images.push_back(std::move(y));
    }
    return Subspace(d, images);
}

namespace detail {
/// Linear conditions on a flattened map Delta expressing Delta(x) in orbit(x):
/// one row w ⊗ x per annihilator row w of the orbit.
inline void append_point_constraint_rows(RrefBuilder& b, const LieAlgebra& L, const DerSpace& der,
                                         const Vec& x) {
    const std::size_t d = L.dim();
    const Subspace orbit = derivation_orbit(L, der, x);
    for (const Vec& w : orbit.annihilator_rows()) {
        Vec row = zero_vec(d * d);
        for (std::size_t r = 0; r < d; ++r) {
            if (is_zero(w[r])) continue;
            for (std::size_t c = 0; c < d; ++c)
                if (!is_zero(x[c])) row[r * d + c] = w[r] * x[c];
        }
        b.insert(std::move(row));
    }
}
}  // namespace detail

/// { Delta in End(L) : Delta(x) in orbit(x) }, flattened row-major. For x != 0
/// its dimension is d^2 - d + dim orbit(x).
inline Subspace point_constraint(const LieAlgebra& L, const DerSpace& der, const Vec& x) {
    RrefBuilder b(L.dim() * L.dim());
    detail::append_point_constraint_rows(b, L, der, x);
    return kernel_of_builder(b);
}

/// Deterministic structured sample points: every basis vector, plus — when L is
/// a Schrödinger algebra — the lemma test elements (both sign branches and both
/// orders of the rotation pairings).
inline std::vector<Vec> structured_points(const LieAlgebra& L) {
    const std::size_t d = L.dim();
    std::vector<Vec> pts;
    for (std::size_t i = 0; i < d; ++i) pts.push_back(basis_vec(d, i));
    if (auto B = detect_schrodinger(L)) {
        const Rat half(1, 2);
        auto mk = [&](std::initializer_list<std::pair<std::size_t, Rat>> terms) {
            Vec x = zero_vec(d);
            for (const auto& [idx, c] : terms) x[idx] += c;
            pts.push_back(std::move(x));
        };
        for (std::size_t i = 1; i <= B->n; ++i) {
            mk({{B->e, 1}, {B->u(i), 1}});
            mk({{B->f, 1}, {B->v(i), 1}});
            mk({{B->h, 1}, {B->u(i), 1}});
            mk({{B->h, 1}, {B->v(i), 1}});
            mk({{B->f, 1}, {B->z, -half}, {B->v(i), 1}});
            mk({{B->f, 1}, {B->z, -half}, {B->v(i), -1}});
            mk({{B->e, 1}, {B->z, half}, {B->u(i), 1}});
            mk({{B->e, 1}, {B->z, half}, {B->u(i), -1}});
            // diagonal Heisenberg mixes: the rotation action couples the u and
            // v sectors at these points, separating per-sector cross maps
            mk({{B->u(i), 1}, {B->v(i), 1}});
            mk({{B->u(i), 1}, {B->v(i), -1}});
        }
        for (std::size_t k = 1; k <= B->n; ++k)
            for (std::size_t l = 1; l <= B->n; ++l) {
                if (k == l) continue;
                const auto [sidx, sign] = B->s_signed(k, l);
                mk({{B->u(k), 1}, {sidx, Rat(sign)}});
                mk({{B->v(k), 1}, {sidx, Rat(sign)}});
                // h freezes sl2 while the mixed Heisenberg pair couples the u
                // and v sectors; these separate sector-permuting maps
                mk({{B->h, 1}, {B->u(k), 1}, {B->v(l), 1}});
            }
        // points on the orbit-degeneracy quadric x_h^2 + x_s^2 + x_e x_f = 0:
        // generic sampling misses it, yet only such points separate maps that
        // move a rotation generator from genuine derivations when so_n is small
        for (std::size_t k = 1; k <= B->n; ++k)
            for (std::size_t l = k + 1; l <= B->n; ++l) {
                mk({{B->e, 1}, {B->f, -1}, {B->s(k, l), 1}});
                mk({{B->e, 1}, {B->f, -1}, {B->s(k, l), -1}});
                mk({{B->e, 1}, {B->z, 1}, {B->u(k), 1}, {B->u(l), 1}});
                mk({{B->f, -1}, {B->z, 1}, {B->v(k), 1}, {B->v(l), 1}});
            }
    }
    return pts;
}

namespace detail {
/// Pseudorandom integer-coordinate point, entries in [-3, 3].
inline Vec random_point(std::mt19937_64& rng, std::size_t d) {
    Vec x(d);
    for (std::size_t c = 0; c < d; ++c)
        x[c] = Rat(static_cast<long>(rng() % 7) - 3);
    return x;
}
}  // namespace detail

enum class LocDerStatus { ProvenEqual, CandidateExcess };

inline std::string to_string(LocDerStatus s) {
    return s == LocDerStatus::ProvenEqual ? "proven_equal" : "candidate_excess";
}

/// A candidate map exceeding the derivation space, with a refuting point when
/// the witness search found one.
struct WitnessRecord {
    LinearMap map;
    std::optional<Vec> point;
};

struct LocDerReport {
    std::string algebra;
    std::size_t dim_der = 0;
    std::size_t dim_candidate = 0;
    LocDerStatus status = LocDerStatus::CandidateExcess;
    std::uint64_t seed = 0;
    std::size_t samples_used = 0;
    std::vector<WitnessRecord> witnesses;
    Subspace candidate;                   // the final sampled intersection
    std::vector<std::size_t> dim_history; // candidate dimension after each sample
};

/// Coefficients over der.space basis maps writing delta(x) as D(x), when they
/// exist (deterministic pivot solution).
inline std::optional<Vec> certify_at(const LieAlgebra& L, const DerSpace& der,
                                     const LinearMap& delta, const Vec& x) {
    const std::size_t d = L.dim();
    Mat a(d, der.space.dim());
    for (std::size_t k = 0; k < der.space.dim(); ++k) {
        const Vec flat = der.space.basis_row(k);
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c)
                if (!is_zero(flat[r * d + c]) && !is_zero(x[c])) a(r, k) += flat[r * d + c] * x[c];
    }
    return solve(a, delta.apply(x));
}

/// First point x (structured sweep, then a fixed-seed pseudorandom sweep, at
/// most `budget` points in total) with delta(x) outside orbit(x).
inline std::optional<Vec> witness_search(const LieAlgebra& L, const DerSpace& der,
                                         const LinearMap& delta, std::size_t budget = 200) {
    std::size_t used = 0;
    for (const Vec& x : structured_points(L)) {
        if (used++ >= budget) return std::nullopt;
        if (!derivation_orbit(L, der, x).contains(delta.apply(x))) return x;
    }
    std::mt19937_64 rng(9001);  // fixed: the search has no seed parameter
    while (used++ < budget) {
        const Vec x = detail::random_point(rng, L.dim());
        if (!derivation_orbit(L, der, x).contains(delta.apply(x))) return x;
    }
    return std::nullopt;
}

/// Sampled upper bound for the local derivation space: intersect the point
/// constraints over the structured points and a seeded pseudorandom stream.
///
/// The candidate dimension is monotone non-increasing and always at least
/// dim der.space (every derivation meets every point constraint). Sampling
/// stops once the dimension is unchanged for `stabilization_window` consecutive
/// samples after the structured sweep, or when `max_samples` points were used.
/// Equal dimensions prove candidate = der.space (status ProvenEqual); anything
/// larger is reported as CandidateExcess together with excess basis maps and
/// the result of a witness search against each.
inline LocDerReport candidate_space(const LieAlgebra& L, const DerSpace& der, std::uint64_t seed,
                                    std::size_t stabilization_window = 5,
                                    std::size_t max_samples = 200) {
    const std::size_t d = L.dim();
    LocDerReport rep;
    rep.algebra = L.name();
    rep.seed = seed;
    rep.dim_der = der.space.dim();

    RrefBuilder b(d * d);
    const std::vector<Vec> structured = structured_points(L);
    std::mt19937_64 rng(seed);

    std::size_t streak = 0;
    std::size_t prev_dim = d * d;
    std::size_t idx = 0;
    while (rep.samples_used < max_samples) {
        const bool in_structured = idx < structured.size();
        const Vec x = in_structured ? structured[idx] : detail::random_point(rng, d);
        ++idx;
        detail::append_point_constraint_rows(b, L, der, x);
        ++rep.samples_used;
        const std::size_t dim_now = d * d - b.rank();
        rep.dim_history.push_back(dim_now);
        if (!in_structured) {
            streak = dim_now == prev_dim ? streak + 1 : 0;
            if (streak >= stabilization_window) break;
        }
        prev_dim = dim_now;
    }

    rep.candidate = kernel_of_builder(b);
    rep.dim_candidate = rep.candidate.dim();
    if (rep.dim_candidate == rep.dim_der) {
        rep.status = LocDerStatus::ProvenEqual;
    } else {
        rep.status = LocDerStatus::CandidateExcess;
        RrefBuilder ext(d * d);
        for (std::size_t r = 0; r < der.space.dim(); ++r) ext.insert(der.space.basis_row(r));
        for (std::size_t r = 0; r < rep.candidate.dim(); ++r) {
            Vec row = rep.candidate.basis_row(r);
            if (ext.insert(row)) {
                WitnessRecord w{LinearMap::from_vec(d, row), std::nullopt};
                w.point = witness_search(L, der, w.map);
                rep.witnesses.push_back(std::move(w));
            }
        }
    }
    return rep;
}

}  // namespace liederiv
