#pragma once

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "liederiv/rational.hpp"

namespace liederiv {

using Vec = std::vector<Rat>;

inline bool is_zero(const Vec& v) {
    for (const Rat& x : v)
        if (!is_zero(x)) return false;
    return true;
}

inline Vec& add_scaled(Vec& target, const Rat& c, const Vec& src) {
    if (target.size() != src.size()) throw std::invalid_argument("vector size mismatch");
    if (is_zero(c)) return target;
    for (std::size_t i = 0; i < src.size(); ++i)
        if (!is_zero(src[i])) target[i] += c * src[i];
    return target;
}

inline Vec operator+(Vec a, const Vec& b) { return add_scaled(a, Rat(1), b); }
inline Vec operator-(Vec a, const Vec& b) { return add_scaled(a, Rat(-1), b); }

inline Vec operator*(const Rat& c, Vec v) {
    for (Rat& x : v) x *= c;
    return v;
}

inline Vec zero_vec(std::size_t n) { return Vec(n, Rat(0)); }

inline Vec basis_vec(std::size_t n, std::size_t i) {
    Vec v = zero_vec(n);
    v.at(i) = 1;
    return v;
}

/// Dense matrix over Rat, row-major storage.
class Mat {
  public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Rat(0)) {}
    Mat(std::initializer_list<std::initializer_list<Rat>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& row : init) {
            if (row.size() != cols_) throw std::invalid_argument("ragged matrix initializer");
            for (const Rat& x : row) data_.push_back(x);
        }
    }

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static Mat from_rows(const std::vector<Vec>& rows, std::size_t cols) {
        Mat m(rows.size(), cols);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != cols) throw std::invalid_argument("row length mismatch");
            for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rat& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Rat& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    Rat& at(std::size_t r, std::size_t c) {
        check(r, c);
        return (*this)(r, c);
    }
    const Rat& at(std::size_t r, std::size_t c) const {
        check(r, c);
        return (*this)(r, c);
    }

    Vec row(std::size_t r) const {
        Vec v(cols_);
        for (std::size_t c = 0; c < cols_; ++c) v[c] = (*this)(r, c);
        return v;
    }
    Vec col(std::size_t c) const {
        Vec v(rows_);
        for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
        return v;
    }

    bool operator==(const Mat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }
    bool operator!=(const Mat& o) const { return !(*this == o); }

    bool is_zero_mat() const {
        for (const Rat& x : data_)
            if (!liederiv::is_zero(x)) return false;
        return true;
    }

    Mat transpose() const {
        Mat t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
        return t;
    }

    Vec apply(const Vec& x) const {
        if (x.size() != cols_) throw std::invalid_argument("matrix/vector size mismatch");
        Vec y = zero_vec(rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                if (!liederiv::is_zero((*this)(r, c))) y[r] += (*this)(r, c) * x[c];
        return y;
    }

    Mat operator*(const Mat& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("matrix product size mismatch");
        Mat p(rows_, o.cols_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Rat& f = (*this)(r, k);
                if (liederiv::is_zero(f)) continue;
                for (std::size_t c = 0; c < o.cols_; ++c)
                    if (!liederiv::is_zero(o(k, c))) p(r, c) += f * o(k, c);
            }
        return p;
    }

    Mat& operator+=(const Mat& o) {
        require_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    Mat& operator-=(const Mat& o) {
        require_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    Mat& operator*=(const Rat& c) {
        for (Rat& x : data_) x *= c;
        return *this;
    }
    friend Mat operator+(Mat a, const Mat& b) { return a += b; }
    friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
    friend Mat operator*(const Rat& c, Mat m) { return m *= c; }

  private:
    void check(std::size_t r, std::size_t c) const {
        if (r >= rows_ || c >= cols_) throw std::out_of_range("matrix index out of range");
    }
    void require_same_shape(const Mat& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("matrix shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rat> data_;
};

}  // namespace liederiv
