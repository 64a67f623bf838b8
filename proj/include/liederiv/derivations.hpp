#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "liederiv/lie_algebra.hpp"
#include "liederiv/linalg.hpp"
#include "liederiv/linear_map.hpp"
#include "liederiv/schrodinger.hpp"

namespace liederiv {

namespace detail {
/// Stream the Leibniz equations row by row. One row per (pair i<j, output
/// coordinate k); unknowns are the d*d map entries in row-major order. A map D
/// is a derivation iff every row annihilates its flattening.
inline void for_each_leibniz_row(const LieAlgebra& L, const std::function<void(Vec&&)>& sink) {
    const std::size_t d = L.dim();
    std::vector<Mat> ad;
    ad.reserve(d);
    for (std::size_t t = 0; t < d; ++t) ad.push_back(L.ad_basis(t));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) {
            const SparseVec cij = L.bracket_of_pair(i, j);
            for (std::size_t k = 0; k < d; ++k) {
                Vec row = zero_vec(d * d);
                bool nonzero = false;
                // D([b_i,b_j])_k
                for (const auto& [m, c] : cij) {
                    row[k * d + m] += c;
                    nonzero = true;
                }
                // -[D b_i, b_j]_k: [b_m, b_j] = -ad(b_j) b_m
                for (std::size_t m = 0; m < d; ++m)
                    if (!is_zero(ad[j](k, m))) {
                        row[m * d + i] += ad[j](k, m);
                        nonzero = true;
                    }
                // -[b_i, D b_j]_k: [b_i, b_m] = ad(b_i) b_m
                for (std::size_t m = 0; m < d; ++m)
                    if (!is_zero(ad[i](k, m))) {
                        row[m * d + j] -= ad[i](k, m);
                        nonzero = true;
                    }
                if (nonzero) sink(std::move(row));
            }
        }
}
}  // namespace detail

/// Full Leibniz constraint matrix (rows: pairs i<j times output coordinates,
/// including rows coming from zero brackets; columns: d*d map entries).
inline Mat leibniz_system(const LieAlgebra& L) {
    const std::size_t d = L.dim();
    std::vector<Vec> rows;
    const std::size_t pair_count = d * (d - 1) / 2;
    rows.reserve(pair_count * d);
    // Materialize every row, zero or not, so the shape is predictable.
    std::vector<Mat> ad;
    ad.reserve(d);
    for (std::size_t t = 0; t < d; ++t) ad.push_back(L.ad_basis(t));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j) {
            const SparseVec cij = L.bracket_of_pair(i, j);
            for (std::size_t k = 0; k < d; ++k) {
                Vec row = zero_vec(d * d);
                for (const auto& [m, c] : cij) row[k * d + m] += c;
                for (std::size_t m = 0; m < d; ++m) {
                    if (!is_zero(ad[j](k, m))) row[m * d + i] += ad[j](k, m);
                    if (!is_zero(ad[i](k, m))) row[m * d + j] -= ad[i](k, m);
                }
                rows.push_back(std::move(row));
            }
        }
    return Mat::from_rows(rows, d * d);
}

/// Derivation space of L: the kernel of the Leibniz system, together with the
/// inner derivations and coset representatives completing inner to the whole
/// space.
struct DerSpace {
    Subspace space;                // subspace of End(L), flattened row-major
    Subspace inner;                // span of ad(b_i)
    std::vector<LinearMap> outer;  // representatives: inner + span(outer) = space

    std::size_t dim() const { return space.dim(); }
    std::size_t map_dim() const {
        return space.ambient() == 0 ? 0 : static_cast<std::size_t>([](std::size_t a) {
            std::size_t d = 0;
            while (d * d < a) ++d;
            return d;
        }(space.ambient()));
    }
    LinearMap basis_map(std::size_t k) const {
        return LinearMap::from_vec(map_dim(), space.basis_row(k));
    }
};

inline DerSpace derivation_space(const LieAlgebra& L) {
    const std::size_t d = L.dim();
    RrefBuilder b(d * d);
    detail::for_each_leibniz_row(L, [&](Vec&& row) { b.insert(std::move(row)); });
    DerSpace der;
    der.space = kernel_of_builder(b);

    std::vector<Vec> ad_vecs;
    ad_vecs.reserve(d);
    for (std::size_t t = 0; t < d; ++t) ad_vecs.push_back(LinearMap(L.ad_basis(t)).to_vec());
    der.inner = Subspace(d * d, ad_vecs);

    RrefBuilder ext(d * d);
    for (std::size_t r = 0; r < der.inner.dim(); ++r) ext.insert(der.inner.basis_row(r));
    for (std::size_t r = 0; r < der.space.dim(); ++r) {
        Vec row = der.space.basis_row(r);
        if (ext.insert(row)) der.outer.push_back(LinearMap::from_vec(d, row));
    }
    return der;
}

/// Outer derivation scaling the Heisenberg part: z -> z, u_i -> u_i/2,
/// v_i -> v_i/2, zero on e, f, h and the rotation generators. Defined for all
/// n >= 1; the n = 1 instance is the classical one-parameter scaling.
inline LinearMap heisenberg_scaling(const SchrodingerBasis& B) {
    LinearMap m = LinearMap::zero(B.dim());
    m.m(B.z, B.z) = 1;
    for (std::size_t i = 1; i <= B.n; ++i) {
        m.m(B.u(i), B.u(i)) = Rat(1, 2);
        m.m(B.v(i), B.v(i)) = Rat(1, 2);
    }
    return m;
}

/// sigma: the Heisenberg scaling on s_n for n >= 2.
inline LinearMap sigma(std::size_t n) {
    if (n < 2) throw std::invalid_argument("sigma is defined for n >= 2 (use sigma1 for n = 1)");
    return heisenberg_scaling(SchrodingerBasis(n));
}

/// sigma1: the Heisenberg scaling on s_1.
inline LinearMap sigma1() { return heisenberg_scaling(SchrodingerBasis(1)); }

/// tau: the exceptional outer derivation of s_2, sending s_{1,2} to z and
/// everything else to zero.
inline LinearMap tau() {
    const SchrodingerBasis B(2);
    LinearMap m = LinearMap::zero(B.dim());
    m.m(B.z, B.s(1, 2)) = 1;
    return m;
}

/// Leibniz check verdict; `violated` names the first basis pair (i, j) whose
/// relation fails, walking defining relations in definition order first and
/// the remaining pairs lexicographically.
struct LeibnizVerdict {
    bool ok = true;
    std::optional<std::pair<std::size_t, std::size_t>> violated;
};

inline LeibnizVerdict is_derivation(const LieAlgebra& L, const LinearMap& D) {
    const std::size_t d = L.dim();
    if (D.dim() != d) throw std::invalid_argument("map dimension mismatch");
    auto holds_at = [&](std::size_t i, std::size_t j) {
        const Vec lhs = D.apply(densify(L.bracket_of_pair(i, j), d));
        Vec rhs = L.bracket(D.column(i), basis_vec(d, j));
        add_scaled(rhs, Rat(1), L.bracket(basis_vec(d, i), D.column(j)));
        return lhs == rhs;
    };
    std::vector<std::vector<bool>> seen(d, std::vector<bool>(d, false));
    for (const auto& r : L.relations()) {
        seen[r.i][r.j] = true;
        if (!holds_at(r.i, r.j)) return {false, std::make_pair(r.i, r.j)};
    }
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
            if (!seen[i][j] && !holds_at(i, j)) return {false, std::make_pair(i, j)};
    return {};
}

/// Block partition of coordinates into consecutive groups.
struct BlockPartition {
    std::vector<std::size_t> sizes;
    std::vector<std::size_t> offsets;  // offsets[g] = start of group g

    explicit BlockPartition(std::vector<std::size_t> sz) : sizes(std::move(sz)) {
        std::size_t off = 0;
        for (std::size_t s : sizes) {
            offsets.push_back(off);
            off += s;
        }
        total = off;
    }
    std::size_t groups() const { return sizes.size(); }
    std::size_t total = 0;

    /// Partition (e,f,h | z,u,v | s) of s_n coordinates.
    static BlockPartition schrodinger(const SchrodingerBasis& B) {
        return BlockPartition({B.g1_size(), B.g2_size(), B.g3_size()});
    }
};

/// Split a square matrix into the partition's block grid.
inline std::vector<std::vector<Mat>> block_decompose(const Mat& m, const BlockPartition& p) {
    if (m.rows() != p.total || m.cols() != p.total)
        throw std::invalid_argument("partition size mismatch");
    std::vector<std::vector<Mat>> blocks(p.groups(), std::vector<Mat>(p.groups()));
    for (std::size_t gr = 0; gr < p.groups(); ++gr)
        for (std::size_t gc = 0; gc < p.groups(); ++gc) {
            Mat b(p.sizes[gr], p.sizes[gc]);
            for (std::size_t r = 0; r < p.sizes[gr]; ++r)
                for (std::size_t c = 0; c < p.sizes[gc]; ++c)
                    b(r, c) = m(p.offsets[gr] + r, p.offsets[gc] + c);
            blocks[gr][gc] = std::move(b);
        }
    return blocks;
}

/// True when every block named in `zero_blocks` (row-group, col-group) vanishes.
inline bool matches_zero_pattern(const Mat& m, const BlockPartition& p,
                                 const std::vector<std::pair<std::size_t, std::size_t>>& zero_blocks) {
    const auto blocks = block_decompose(m, p);
    for (const auto& [gr, gc] : zero_blocks)
        if (!blocks.at(gr).at(gc).is_zero_mat()) return false;
    return true;
}

/// The zero blocks every derivation (and local derivation) of s_n exhibits:
/// pattern [[*,0,0],[*,*,*],[0,0,*]] over the (e,f,h | z,u,v | s) grouping.
inline const std::vector<std::pair<std::size_t, std::size_t>>& derivation_zero_blocks() {
    static const std::vector<std::pair<std::size_t, std::size_t>> zb = {
        {0, 1}, {0, 2}, {2, 0}, {2, 1}};
    return zb;
}

/// Verdict of the structural decomposition check Der(s_n) = Inn ⊕ span(outer
/// representatives), with the named outer maps (sigma1 / sigma, tau / sigma).
struct DecompositionReport {
    std::size_t n = 0;
    std::size_t dim_der = 0;
    std::size_t dim_inn = 0;
    std::size_t n_outer = 0;
    bool outer_are_derivations = false;
    bool outer_independent_of_inner = false;
    bool direct_sum = false;  // Inn ⊕ span(outer) = Der, trivial intersection

    bool all_ok() const {
        return outer_are_derivations && outer_independent_of_inner && direct_sum;
    }
};

/// Named outer derivations of s_n: sigma1 for n = 1, {sigma, tau} for n = 2,
/// sigma for n >= 3.
inline std::vector<LinearMap> named_outer_derivations(std::size_t n) {
    if (n == 1) return {sigma1()};
    if (n == 2) return {sigma(2), tau()};
    return {sigma(n)};
}

/// Check the derivation decomposition of a Schrödinger algebra; L must be
/// recognizable as s_n (labels and bracket table).
inline DecompositionReport verify_outer_decomposition(const LieAlgebra& L) {
    auto B = detect_schrodinger(L);
    if (!B) throw std::invalid_argument("algebra is not a Schrödinger algebra s_n");
    const DerSpace der = derivation_space(L);

    DecompositionReport rep;
    rep.n = B->n;
    rep.dim_der = der.space.dim();
    rep.dim_inn = der.inner.dim();

    const std::vector<LinearMap> outers = named_outer_derivations(B->n);
    rep.n_outer = outers.size();

    rep.outer_are_derivations = true;
    rep.outer_independent_of_inner = true;
    std::vector<Vec> outer_vecs;
    for (const LinearMap& o : outers) {
        if (!is_derivation(L, o).ok) rep.outer_are_derivations = false;
        if (!der.space.contains(o.to_vec())) rep.outer_are_derivations = false;
        if (der.inner.contains(o.to_vec())) rep.outer_independent_of_inner = false;
        outer_vecs.push_back(o.to_vec());
    }
    const Subspace outer_span(L.dim() * L.dim(), outer_vecs);
    rep.direct_sum = outer_span.dim() == outers.size() &&
                     intersect(der.inner, outer_span).dim() == 0 &&
                     join(der.inner, outer_span) == der.space;
    return rep;
}

}  // namespace liederiv
