#pragma once

#include <cstddef>
#include <stdexcept>

#include "liederiv/matrix.hpp"

namespace liederiv {

/// Square matrix acting on algebra coordinates; column j is the image of the
/// j-th basis vector. Flattening into End-coordinates is row-major:
/// entry (r, c) lives at index r*dim + c.
struct LinearMap {
    Mat m;

    LinearMap() = default;
    explicit LinearMap(Mat mat) : m(std::move(mat)) {
        if (m.rows() != m.cols()) throw std::invalid_argument("linear map must be square");
    }

    static LinearMap zero(std::size_t d) { return LinearMap(Mat(d, d)); }
    static LinearMap identity(std::size_t d) { return LinearMap(Mat::identity(d)); }
    /// Elementary map sending basis vector `from` to basis vector `to`.
    static LinearMap unit(std::size_t d, std::size_t to, std::size_t from) {
        LinearMap e = zero(d);
        e.m.at(to, from) = 1;
        return e;
    }
    static LinearMap from_vec(std::size_t d, const Vec& flat) {
        if (flat.size() != d * d) throw std::invalid_argument("flattened size mismatch");
        Mat m(d, d);
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c) m(r, c) = flat[r * d + c];
        return LinearMap(std::move(m));
    }

    std::size_t dim() const { return m.rows(); }

    Vec to_vec() const {
        Vec flat;
        flat.reserve(dim() * dim());
        for (std::size_t r = 0; r < dim(); ++r)
            for (std::size_t c = 0; c < dim(); ++c) flat.push_back(m(r, c));
        return flat;
    }

    Vec apply(const Vec& x) const { return m.apply(x); }
    Vec column(std::size_t j) const { return m.col(j); }
    bool is_zero_map() const { return m.is_zero_mat(); }

    LinearMap& operator+=(const LinearMap& o) {
        m += o.m;
        return *this;
    }
    LinearMap& operator-=(const LinearMap& o) {
        m -= o.m;
        return *this;
    }
    friend LinearMap operator+(LinearMap a, const LinearMap& b) { return a += b; }
    friend LinearMap operator-(LinearMap a, const LinearMap& b) { return a -= b; }
    friend LinearMap operator*(const Rat& c, LinearMap a) {
        a.m *= c;
        return a;
    }
    /// Composition (this after o).
    LinearMap compose(const LinearMap& o) const { return LinearMap(m * o.m); }

    bool operator==(const LinearMap& o) const { return m == o.m; }
    bool operator!=(const LinearMap& o) const { return !(*this == o); }
};

/// Commutator of linear maps [A, B] = AB - BA.
inline LinearMap map_commutator(const LinearMap& a, const LinearMap& b) {
    return LinearMap(a.m * b.m - b.m * a.m);
}

}  // namespace liederiv
