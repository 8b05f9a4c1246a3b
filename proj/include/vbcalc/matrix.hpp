#pragma once

#include <string>
#include <vector>

#include "vbcalc/polynomial.hpp"
#include "vbcalc/polyvector.hpp"

namespace vbcalc {

/// Dense matrix of polynomials. Row index = output frame element, column
/// index = source frame element throughout the library.
class PolyMatrix {
public:
    PolyMatrix() = default;

    PolyMatrix(Chart chart, std::size_t rows, std::size_t cols)
        : chart_(std::move(chart)),
          rows_(rows),
          cols_(cols),
          data_(rows * cols, Polynomial::zero(chart_)) {}

    static PolyMatrix identity(const Chart& chart, std::size_t n) {
        PolyMatrix m(chart, n, n);
        for (std::size_t i = 0; i < n; ++i)
            m.at(i, i) = Polynomial::constant(chart, 1);
        return m;
    }

    const Chart& chart() const { return chart_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Polynomial& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Polynomial& at(std::size_t r, std::size_t c) const {
        return data_[r * cols_ + c];
    }

    bool is_zero() const {
        for (const auto& p : data_)
            if (!p.is_zero()) return false;
        return true;
    }

    friend PolyMatrix operator+(const PolyMatrix& a, const PolyMatrix& b) {
        require_same_shape(a, b);
        PolyMatrix r = a;
        for (std::size_t i = 0; i < r.data_.size(); ++i)
            r.data_[i] = r.data_[i] + b.data_[i];
        return r;
    }

    friend PolyMatrix operator-(const PolyMatrix& a, const PolyMatrix& b) {
        require_same_shape(a, b);
        PolyMatrix r = a;
        for (std::size_t i = 0; i < r.data_.size(); ++i)
            r.data_[i] = r.data_[i] - b.data_[i];
        return r;
    }

    friend PolyMatrix operator-(const PolyMatrix& a) {
        PolyMatrix r = a;
        for (auto& p : r.data_) p = -p;
        return r;
    }

    friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
        if (a.cols_ != b.rows_) throw Error("matrix shape mismatch in product");
        PolyMatrix r(a.chart_, a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                if (a.at(i, k).is_zero()) continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    r.at(i, j) = r.at(i, j) + a.at(i, k) * b.at(k, j);
            }
        return r;
    }

    friend PolyMatrix operator*(const Polynomial& f, const PolyMatrix& a) {
        PolyMatrix r = a;
        for (auto& p : r.data_) p = f * p;
        return r;
    }

    PolyMatrix transposed() const {
        PolyMatrix r(chart_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    /// Entrywise derivative along a vector field.
    PolyMatrix derived_along(const PolyVector& x) const {
        PolyMatrix r(chart_, rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r.at(i, j) = x.apply(at(i, j));
        return r;
    }

    /// Matrix-vector action on component lists.
    std::vector<Polynomial> apply(const std::vector<Polynomial>& v) const {
        if (v.size() != cols_) throw Error("matrix-vector shape mismatch");
        std::vector<Polynomial> r(rows_, Polynomial::zero(chart_));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) {
                if (at(i, j).is_zero() || v[j].is_zero()) continue;
                r[i] = r[i] + at(i, j) * v[j];
            }
        return r;
    }

    friend bool operator==(const PolyMatrix& a, const PolyMatrix& b) {
        return a.chart_ == b.chart_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ &&
               a.data_ == b.data_;
    }
    friend bool operator!=(const PolyMatrix& a, const PolyMatrix& b) {
        return !(a == b);
    }

    std::string to_string() const {
        std::string out = "[";
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i) out += "; ";
            for (std::size_t j = 0; j < cols_; ++j) {
                if (j) out += ", ";
                out += at(i, j).to_string();
            }
        }
        return out + "]";
    }

private:
    static void require_same_shape(const PolyMatrix& a, const PolyMatrix& b) {
        if (a.chart_ != b.chart_ || a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw Error("matrix shape mismatch");
    }

    Chart chart_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Polynomial> data_;
};

inline PolyMatrix matrix_commutator(const PolyMatrix& a, const PolyMatrix& b) {
    return a * b - b * a;
}

}  // namespace vbcalc
