#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "liederiv/linalg.hpp"
#include "liederiv/matrix.hpp"

namespace liederiv {

/// Sparse vector in basis coordinates: (index, coefficient), sorted by index,
/// coefficients nonzero.
using SparseVec = std::vector<std::pair<std::size_t, Rat>>;

inline Vec densify(const SparseVec& s, std::size_t dim) {
    Vec v = zero_vec(dim);
    for (const auto& [k, c] : s) v.at(k) = c;
    return v;
}

/// Finite-dimensional Lie algebra over Q given by structure constants.
///
/// Brackets are stored once per unordered basis pair, keyed (i, j) with i < j;
/// the i > j direction is derived by antisymmetry. The defining relations also
/// keep their *definition order*: checkers that report "first violated pair"
/// walk that order first, then the remaining (zero-bracket) pairs
/// lexicographically, so reported pairs are deterministic and reflect how the
/// algebra was constructed.
class LieAlgebra {
  public:
    struct Relation {
        std::size_t i, j;  // i < j
        SparseVec terms;
    };

    LieAlgebra() = default;
    LieAlgebra(std::string name, std::vector<std::string> labels)
        : name_(std::move(name)), labels_(std::move(labels)) {
        for (std::size_t a = 0; a < labels_.size(); ++a)
            for (std::size_t b = a + 1; b < labels_.size(); ++b)
                if (labels_[a] == labels_[b])
                    throw std::invalid_argument("duplicate basis label: " + labels_[a]);
    }

    const std::string& name() const { return name_; }
    void set_name(std::string n) { name_ = std::move(n); }
    std::size_t dim() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(std::size_t i) const { return labels_.at(i); }

    std::optional<std::size_t> index_of(const std::string& label) const {
        for (std::size_t i = 0; i < labels_.size(); ++i)
            if (labels_[i] == label) return i;
        return std::nullopt;
    }

    /// Define [b_i, b_j] (any order of i, j; antisymmetry is applied).
    void set_bracket(std::size_t i, std::size_t j, SparseVec terms) {
        if (i >= dim() || j >= dim()) throw std::out_of_range("basis index out of range");
        bool negate = false;
        if (i == j) {
            if (!normalized(terms).empty()) throw std::invalid_argument("[x,x] must vanish");
            return;
        }
        if (i > j) {
            std::swap(i, j);
            negate = true;
        }
        SparseVec t = normalized(std::move(terms));
        if (negate)
            for (auto& [k, c] : t) c = -c;
        for (const auto& [k, c] : t)
            if (k >= dim()) throw std::out_of_range("bracket target index out of range");
        const auto key = std::make_pair(i, j);
        auto it = lookup_.find(key);
        if (it != lookup_.end()) {
            relations_[it->second].terms = std::move(t);
        } else if (!t.empty()) {
            lookup_[key] = relations_.size();
            relations_.push_back({i, j, std::move(t)});
        }
    }

    /// Signed structure constants of [b_i, b_j]; empty when zero or i == j.
    SparseVec bracket_of_pair(std::size_t i, std::size_t j) const {
        if (i == j) return {};
        const bool flip = i > j;
        if (flip) std::swap(i, j);
        auto it = lookup_.find({i, j});
        if (it == lookup_.end()) return {};
        SparseVec t = relations_[it->second].terms;
        if (flip)
            for (auto& [k, c] : t) c = -c;
        return t;
    }

    /// Relations in definition order (nonzero brackets only).
    const std::vector<Relation>& relations() const { return relations_; }

    /// Bilinear bracket of coordinate vectors.
    Vec bracket(const Vec& x, const Vec& y) const {
        if (x.size() != dim() || y.size() != dim())
            throw std::invalid_argument("element dimension mismatch");
        Vec out = zero_vec(dim());
        for (const Relation& r : relations_) {
            const Rat f = x[r.i] * y[r.j] - x[r.j] * y[r.i];
            if (is_zero(f)) continue;
            for (const auto& [k, c] : r.terms) out[k] += f * c;
        }
        return out;
    }

    /// Adjoint operator ad(y) = [y, -] as a matrix.
    Mat ad(const Vec& y) const {
        if (y.size() != dim()) throw std::invalid_argument("element dimension mismatch");
        Mat m(dim(), dim());
        for (const Relation& r : relations_) {
            if (!is_zero(y[r.i]))
                for (const auto& [k, c] : r.terms) m(k, r.j) += y[r.i] * c;
            if (!is_zero(y[r.j]))
                for (const auto& [k, c] : r.terms) m(k, r.i) -= y[r.j] * c;
        }
        return m;
    }

    Mat ad_basis(std::size_t t) const { return ad(basis_vec(dim(), t)); }

    /// All basis triples (i, j, k), i < j < k, violating the Jacobi identity.
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> jacobi_violations() const {
        std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> bad;
        const std::size_t d = dim();
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = i + 1; j < d; ++j)
                for (std::size_t k = j + 1; k < d; ++k) {
                    Vec sum = bracket_with_basis(bracket_of_pair(i, j), k);
                    add_scaled(sum, Rat(1), bracket_with_basis(bracket_of_pair(j, k), i));
                    add_scaled(sum, Rat(1), bracket_with_basis(bracket_of_pair(k, i), j));
                    if (!is_zero(sum)) bad.emplace_back(i, j, k);
                }
        return bad;
    }

    /// Center { x : [x, y] = 0 for all y }.
    Subspace center() const {
        RrefBuilder b(dim());
        for (std::size_t j = 0; j < dim(); ++j) {
            const Mat a = ad_basis(j);
            for (std::size_t r = 0; r < dim(); ++r) b.insert(a.row(r));
        }
        return kernel_of_builder(b);
    }

  private:
    static SparseVec normalized(SparseVec t) {
        std::sort(t.begin(), t.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        SparseVec out;
        for (auto& [k, c] : t) {
            if (!out.empty() && out.back().first == k)
                out.back().second += c;
            else
                out.emplace_back(k, c);
            if (!out.empty() && is_zero(out.back().second)) out.pop_back();
        }
        return out;
    }

    Vec bracket_with_basis(const SparseVec& s, std::size_t t) const {
        Vec out = zero_vec(dim());
        for (const auto& [m, c] : s)
            for (const auto& [k, c2] : bracket_of_pair(m, t)) out[k] += c * c2;
        return out;
    }

    std::string name_;
    std::vector<std::string> labels_;
    std::vector<Relation> relations_;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> lookup_;
};

/// Abelian algebra of the given dimension (all brackets zero).
inline LieAlgebra build_abelian(std::size_t m) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < m; ++i) labels.push_back("x" + std::to_string(i + 1));
    return LieAlgebra("abelian" + std::to_string(m), std::move(labels));
}

/// External direct sum; summand brackets are kept, cross brackets vanish.
/// Colliding labels from b acquire primes to stay distinct.
inline LieAlgebra direct_sum(const LieAlgebra& a, const LieAlgebra& b) {
    std::vector<std::string> labels = a.labels();
    for (std::string lbl : b.labels()) {
        while (std::find(labels.begin(), labels.end(), lbl) != labels.end()) lbl += "'";
        labels.push_back(lbl);
    }
    LieAlgebra sum(a.name() + "+" + b.name(), std::move(labels));
    for (const auto& r : a.relations()) sum.set_bracket(r.i, r.j, r.terms);
    const std::size_t off = a.dim();
    for (const auto& r : b.relations()) {
        SparseVec t = r.terms;
        for (auto& [k, c] : t) k += off;
        sum.set_bracket(r.i + off, r.j + off, std::move(t));
    }
    return sum;
}

/// Human-readable rendering of an element, e.g. "f - 1/2 z + v1".
inline std::string format_element(const LieAlgebra& L, const Vec& x) {
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (is_zero(x[i])) continue;
        Rat c = x[i];
        if (first) {
            if (c < 0) {
                os << "-";
                c = -c;
            }
        } else {
            os << (c < 0 ? " - " : " + ");
            if (c < 0) c = -c;
        }
        if (c != 1) os << rat_to_string(c) << " ";
        os << L.label(i);
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

}  // namespace liederiv
