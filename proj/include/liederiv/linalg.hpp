#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "liederiv/matrix.hpp"

namespace liederiv {

/// Incremental reduced-row-echelon accumulator.
///
/// Stored rows are kept fully reduced at all times: each row has a leading 1 at
/// its pivot column, every other stored row is zero at that column, and rows are
/// ordered by pivot. Because stored rows vanish at every pivot column but their
/// own, reducing a fresh vector is a single pass over the stored rows.
/// The accumulated rows are exactly the canonical RREF of everything inserted,
/// which makes downstream subspace comparisons representation equality.
class RrefBuilder {
  public:
    explicit RrefBuilder(std::size_t width) : width_(width) {}

    std::size_t width() const { return width_; }
    std::size_t rank() const { return rows_.size(); }

    /// Reduce v against the accumulated rows (v is modified in place).
    void reduce(Vec& v) const {
        if (v.size() != width_) throw std::invalid_argument("row width mismatch");
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            const Rat& f = v[pivots_[k]];
            if (!is_zero(f)) {
                const Rat c = -f;
                add_scaled(v, c, rows_[k]);
            }
        }
    }

    /// Insert a row; returns true when it was independent (rank grew).
    bool insert(Vec v) {
        reduce(v);
        std::size_t p = 0;
        while (p < width_ && is_zero(v[p])) ++p;
        if (p == width_) return false;
        if (v[p] != 1) {
            const Rat inv = Rat(1) / v[p];
            for (std::size_t c = p; c < width_; ++c)
                if (!is_zero(v[c])) v[c] *= inv;
        }
        // Clear the new pivot column from existing rows; they only change at p
        // and at free columns, so full reduction is preserved.
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            const Rat f = rows_[k][p];
            if (!is_zero(f)) add_scaled(rows_[k], -f, v);
        }
        const auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), p) - pivots_.begin();
        pivots_.insert(pivots_.begin() + pos, p);
        rows_.insert(rows_.begin() + pos, std::move(v));
        return true;
    }

    const std::vector<Vec>& rows() const { return rows_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

  private:
    std::size_t width_;
    std::vector<Vec> rows_;
    std::vector<std::size_t> pivots_;
};

/// Linear subspace of Q^ambient held as a canonical RREF basis; equal subspaces
/// have identical representations, so operator== is exact subspace equality.
class Subspace {
  public:
    Subspace() = default;
    explicit Subspace(std::size_t ambient) : ambient_(ambient), basis_(0, ambient) {}
    Subspace(std::size_t ambient, const std::vector<Vec>& spanning) : ambient_(ambient) {
        RrefBuilder b(ambient);
        for (const Vec& v : spanning) b.insert(v);
        adopt(b);
    }

    static Subspace zero(std::size_t ambient) { return Subspace(ambient); }
    static Subspace full(std::size_t ambient) {
        Subspace s(ambient);
        s.basis_ = Mat::identity(ambient);
        s.pivots_.resize(ambient);
        for (std::size_t i = 0; i < ambient; ++i) s.pivots_[i] = i;
        return s;
    }
    static Subspace from_builder(const RrefBuilder& b) {
        Subspace s(b.width());
        s.adopt(b);
        return s;
    }

    std::size_t ambient() const { return ambient_; }
    std::size_t dim() const { return basis_.rows(); }
    const Mat& basis() const { return basis_; }
    Vec basis_row(std::size_t i) const { return basis_.row(i); }

    /// Residual of v after reduction against the basis; zero iff v lies inside.
    Vec reduce(Vec v) const {
        if (v.size() != ambient_) throw std::invalid_argument("ambient dimension mismatch");
        for (std::size_t k = 0; k < basis_.rows(); ++k) {
            const Rat f = v[pivots_[k]];
            if (!is_zero(f))
                for (std::size_t c = 0; c < ambient_; ++c)
                    if (!is_zero(basis_(k, c))) v[c] -= f * basis_(k, c);
        }
        return v;
    }

    bool contains(const Vec& v) const { return liederiv::is_zero(reduce(v)); }

    bool contains(const Subspace& other) const {
        if (other.ambient_ != ambient_) return false;
        for (std::size_t k = 0; k < other.dim(); ++k)
            if (!contains(other.basis_row(k))) return false;
        return true;
    }

    bool operator==(const Subspace& o) const { return ambient_ == o.ambient_ && basis_ == o.basis_; }
    bool operator!=(const Subspace& o) const { return !(*this == o); }

    /// Rows W with this = { v : W v = 0 }; complement-sized (ambient - dim rows).
    std::vector<Vec> annihilator_rows() const;

  private:
    void adopt(const RrefBuilder& b) {
        basis_ = Mat::from_rows(b.rows(), ambient_);
        pivots_ = b.pivots();
    }

    std::size_t ambient_ = 0;
    Mat basis_ = Mat(0, 0);
    std::vector<std::size_t> pivots_;
};

/// Kernel of the accumulated row system { v : R v = 0 }, one basis vector per
/// free column, then canonicalized.
inline Subspace kernel_of_builder(const RrefBuilder& b) {
    const std::size_t w = b.width();
    std::vector<bool> is_pivot(w, false);
    for (std::size_t p : b.pivots()) is_pivot[p] = true;
    std::vector<Vec> out;
    out.reserve(w - b.rank());
    for (std::size_t f = 0; f < w; ++f) {
        if (is_pivot[f]) continue;
        Vec v = zero_vec(w);
        v[f] = 1;
        for (std::size_t k = 0; k < b.rank(); ++k) v[b.pivots()[k]] = -b.rows()[k][f];
        out.push_back(std::move(v));
    }
    return Subspace(w, out);
}

inline std::vector<Vec> Subspace::annihilator_rows() const {
    RrefBuilder b(ambient_);
    for (std::size_t r = 0; r < basis_.rows(); ++r) b.insert(basis_.row(r));
    Subspace k = kernel_of_builder(b);
    std::vector<Vec> rows;
    rows.reserve(k.dim());
    for (std::size_t r = 0; r < k.dim(); ++r) rows.push_back(k.basis_row(r));
    return rows;
}

/// Reduced row echelon form, shape preserved (dependent rows become zero rows).
inline Mat rref(const Mat& m) {
    RrefBuilder b(m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) b.insert(m.row(r));
    Mat out(m.rows(), m.cols());
    for (std::size_t r = 0; r < b.rank(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = b.rows()[r][c];
    return out;
}

inline std::size_t rank(const Mat& m) {
    RrefBuilder b(m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) b.insert(m.row(r));
    return b.rank();
}

/// { x : m x = 0 }.
inline Subspace kernel(const Mat& m) {
    RrefBuilder b(m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) b.insert(m.row(r));
    return kernel_of_builder(b);
}

/// Column space of m, as a subspace of Q^rows.
inline Subspace image(const Mat& m) {
    std::vector<Vec> cols;
    cols.reserve(m.cols());
    for (std::size_t c = 0; c < m.cols(); ++c) cols.push_back(m.col(c));
    return Subspace(m.rows(), cols);
}

/// One exact solution of m x = v or nullopt when inconsistent. Deterministic:
/// the pivot solution with every free variable set to zero.
inline std::optional<Vec> solve(const Mat& m, const Vec& v) {
    if (v.size() != m.rows()) throw std::invalid_argument("rhs size mismatch");
    const std::size_t n = m.cols();
    RrefBuilder b(n + 1);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Vec row(n + 1);
        for (std::size_t c = 0; c < n; ++c) row[c] = m(r, c);
        row[n] = v[r];
        b.insert(std::move(row));
    }
    Vec x = zero_vec(n);
    for (std::size_t k = 0; k < b.rank(); ++k) {
        const std::size_t p = b.pivots()[k];
        if (p == n) return std::nullopt;  // row (0 ... 0 | 1): inconsistent
        x[p] = b.rows()[k][n];
    }
    return x;
}

/// Intersection via annihilators: a ∩ b = ker of the stacked annihilator rows.
inline Subspace intersect(const Subspace& a, const Subspace& b) {
    if (a.ambient() != b.ambient()) throw std::invalid_argument("ambient dimension mismatch");
    RrefBuilder rb(a.ambient());
    for (Vec& r : a.annihilator_rows()) rb.insert(std::move(r));
    for (Vec& r : b.annihilator_rows()) rb.insert(std::move(r));
    return kernel_of_builder(rb);
}

/// Smallest subspace containing both (the sum a + b).
inline Subspace join(const Subspace& a, const Subspace& b) {
    if (a.ambient() != b.ambient()) throw std::invalid_argument("ambient dimension mismatch");
    std::vector<Vec> rows;
    for (std::size_t r = 0; r < a.dim(); ++r) rows.push_back(a.basis_row(r));
    for (std::size_t r = 0; r < b.dim(); ++r) rows.push_back(b.basis_row(r));
    return Subspace(a.ambient(), rows);
}

}  // namespace liederiv
