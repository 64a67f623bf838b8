#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "liederiv/lie_algebra.hpp"

namespace liederiv {

/// Basis bookkeeping for the Schrödinger algebra s_n.
///
/// Basis order: e, f, h, z, u_1..u_n, v_1..v_n, s_{1,2}, s_{1,3}, ..,
/// s_{n-1,n} (rotation generators in lexicographic index order). The grouping
/// (e,f,h | z,u,v | s) drives every block decomposition in the toolkit.
struct SchrodingerBasis {
    std::size_t n = 0;

    static constexpr std::size_t e = 0, f = 1, h = 2, z = 3;

    explicit SchrodingerBasis(std::size_t n_) : n(n_) {
        if (n == 0) throw std::invalid_argument("Schrödinger rank n must be >= 1");
    }

    std::size_t dim() const { return 4 + 2 * n + n * (n - 1) / 2; }
    std::size_t g1_size() const { return 3; }
    std::size_t g2_size() const { return 1 + 2 * n; }
    std::size_t g3_size() const { return n * (n - 1) / 2; }

    std::size_t u(std::size_t i) const {
        require_index(i);
        return 3 + i;
    }
    std::size_t v(std::size_t i) const {
        require_index(i);
        return 3 + n + i;
    }
    /// Index of s_{k,l}, k < l required.
    std::size_t s(std::size_t k, std::size_t l) const {
        require_index(k);
        require_index(l);
        if (k >= l) throw std::invalid_argument("s(k,l) requires k < l");
        return 4 + 2 * n + (k - 1) * n - k * (k - 1) / 2 + (l - k - 1);
    }
    /// s_{k,l} for any k != l as (index, sign): s_{l,k} = -s_{k,l}.
    std::pair<std::size_t, int> s_signed(std::size_t k, std::size_t l) const {
        if (k < l) return {s(k, l), 1};
        return {s(l, k), -1};
    }

    std::vector<std::string> make_labels() const {
        std::vector<std::string> labels = {"e", "f", "h", "z"};
        for (std::size_t i = 1; i <= n; ++i) labels.push_back("u" + std::to_string(i));
        for (std::size_t i = 1; i <= n; ++i) labels.push_back("v" + std::to_string(i));
        for (std::size_t k = 1; k <= n; ++k)
            for (std::size_t l = k + 1; l <= n; ++l)
                labels.push_back("s" + std::to_string(k) + "_" + std::to_string(l));
        return labels;
    }

    /// Rank n such that dim = 4 + 2n + n(n-1)/2, when one exists.
    static std::optional<std::size_t> rank_for_dim(std::size_t d) {
        for (std::size_t n = 1; 4 + 2 * n + n * (n - 1) / 2 <= d; ++n)
            if (4 + 2 * n + n * (n - 1) / 2 == d) return n;
        return std::nullopt;
    }

  private:
    void require_index(std::size_t i) const {
        if (i < 1 || i > n) throw std::out_of_range("index out of 1..n");
    }
};

/// sl_2 with basis e, f, h: [h,e] = 2e, [h,f] = -2f, [e,f] = h.
inline LieAlgebra build_sl2() {
    LieAlgebra L("sl2", {"e", "f", "h"});
    L.set_bracket(2, 0, {{0, 2}});   // [h,e] = 2e
    L.set_bracket(2, 1, {{1, -2}});  // [h,f] = -2f
    L.set_bracket(0, 1, {{2, 1}});   // [e,f] = h
    return L;
}

namespace detail {
/// [s_{ij}, s_{kl}] = d_{kj} s_{il} + d_{il} s_{jk} + d_{lj} s_{ki} + d_{ki} s_{lj},
/// with s indices canonicalized by antisymmetry and s_{aa} = 0.
inline SparseVec so_bracket(const SchrodingerBasis& B, std::size_t i, std::size_t j,
                            std::size_t k, std::size_t l,
                            std::size_t (*index_of)(const SchrodingerBasis&, std::size_t,
                                                    std::size_t)) {
    SparseVec acc;
    auto add = [&](bool delta, std::size_t a, std::size_t b) {
        if (!delta || a == b) return;
        const int sign = a < b ? 1 : -1;
        const std::size_t idx =
            a < b ? index_of(B, a, b) : index_of(B, b, a);
        acc.emplace_back(idx, Rat(sign));
    };
    add(k == j, i, l);
    add(i == l, j, k);
    add(l == j, k, i);
    add(k == i, l, j);
    return acc;
}
}  // namespace detail

/// so_n spanned by s_{k,l}, k < l; zero algebra for n = 1.
inline LieAlgebra build_so(std::size_t n) {
    if (n == 0) throw std::invalid_argument("so rank n must be >= 1");
    SchrodingerBasis B(n);
    std::vector<std::string> labels;
    for (std::size_t k = 1; k <= n; ++k)
        for (std::size_t l = k + 1; l <= n; ++l)
            labels.push_back("s" + std::to_string(k) + "_" + std::to_string(l));
    LieAlgebra L("so" + std::to_string(n), std::move(labels));
    auto idx = +[](const SchrodingerBasis& b, std::size_t k, std::size_t l) {
        return b.s(k, l) - (4 + 2 * b.n);
    };
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = i + 1; j <= n; ++j)
            for (std::size_t k = 1; k <= n; ++k)
                for (std::size_t l = k + 1; l <= n; ++l) {
                    if (std::make_pair(i, j) >= std::make_pair(k, l)) continue;
                    L.set_bracket(idx(B, i, j), idx(B, k, l),
                                  detail::so_bracket(B, i, j, k, l, idx));
                }
    return L;
}

/// Heisenberg algebra h_n with basis z, u_1..u_n, v_1..v_n and [u_i, v_i] = z.
inline LieAlgebra build_heisenberg(std::size_t n) {
    if (n == 0) throw std::invalid_argument("Heisenberg rank n must be >= 1");
    std::vector<std::string> labels = {"z"};
    for (std::size_t i = 1; i <= n; ++i) labels.push_back("u" + std::to_string(i));
    for (std::size_t i = 1; i <= n; ++i) labels.push_back("v" + std::to_string(i));
    LieAlgebra L("h" + std::to_string(n), std::move(labels));
    for (std::size_t i = 1; i <= n; ++i) L.set_bracket(i, n + i, {{0, 1}});
    return L;
}

/// Schrödinger algebra s_n = (sl_2 ⊕ so_n) ⋉ h_n.
///
/// The central-extension core [u_i, v_i] = z is laid down first (the ideal the
/// rest acts on), so definition-order diagnostics report it first; the action
/// and subalgebra relations follow.
inline LieAlgebra build_schrodinger(std::size_t n) {
    if (n == 0) throw std::invalid_argument("Schrödinger rank n must be >= 1");
    const SchrodingerBasis B(n);
    LieAlgebra L("s" + std::to_string(n), B.make_labels());

    for (std::size_t i = 1; i <= n; ++i) L.set_bracket(B.u(i), B.v(i), {{B.z, 1}});

    L.set_bracket(B.h, B.e, {{B.e, 2}});
    L.set_bracket(B.h, B.f, {{B.f, -2}});
    L.set_bracket(B.e, B.f, {{B.h, 1}});

    for (std::size_t i = 1; i <= n; ++i) {
        L.set_bracket(B.h, B.u(i), {{B.u(i), 1}});
        L.set_bracket(B.h, B.v(i), {{B.v(i), -1}});
        L.set_bracket(B.e, B.v(i), {{B.u(i), 1}});
        L.set_bracket(B.f, B.u(i), {{B.v(i), 1}});
    }

    // [s_{kl}, u_i] = d_{li} u_k - d_{ki} u_l, and likewise on v.
    for (std::size_t k = 1; k <= n; ++k)
        for (std::size_t l = k + 1; l <= n; ++l) {
            L.set_bracket(B.s(k, l), B.u(l), {{B.u(k), 1}});
            L.set_bracket(B.s(k, l), B.u(k), {{B.u(l), -1}});
            L.set_bracket(B.s(k, l), B.v(l), {{B.v(k), 1}});
            L.set_bracket(B.s(k, l), B.v(k), {{B.v(l), -1}});
        }

    auto idx = +[](const SchrodingerBasis& b, std::size_t k, std::size_t l) {
        return b.s(k, l);
    };
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = i + 1; j <= n; ++j)
            for (std::size_t k = 1; k <= n; ++k)
                for (std::size_t l = k + 1; l <= n; ++l) {
                    if (std::make_pair(i, j) >= std::make_pair(k, l)) continue;
                    L.set_bracket(B.s(i, j), B.s(k, l),
                                  detail::so_bracket(B, i, j, k, l, idx));
                }
    return L;
}

/// Recognize a Schrödinger algebra: dimension, labels and full bracket table
/// must match build_schrodinger(n). Toolkit stages that rely on the specific
/// basis roles call this instead of trusting labels alone.
inline std::optional<SchrodingerBasis> detect_schrodinger(const LieAlgebra& L) {
    auto n = SchrodingerBasis::rank_for_dim(L.dim());
    if (!n) return std::nullopt;
    const LieAlgebra ref = build_schrodinger(*n);
    if (L.labels() != ref.labels()) return std::nullopt;
    for (std::size_t i = 0; i < L.dim(); ++i)
        for (std::size_t j = i + 1; j < L.dim(); ++j)
            if (L.bracket_of_pair(i, j) != ref.bracket_of_pair(i, j)) return std::nullopt;
    return SchrodingerBasis(*n);
}

}  // namespace liederiv
