#include "gmdsim/complex_matrix.hpp"

#include "gmdsim/errors.hpp"

#include <cmath>
#include <string>

namespace gmdsim {

namespace {

void require_shape(std::size_t rows, std::size_t cols)
{
    if (rows == 0 || cols == 0) {
        throw DimensionMismatch("ComplexMatrix: shape must be at least 1x1, got " +
                                std::to_string(rows) + "x" + std::to_string(cols));
    }
}

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionMismatch(std::string("ComplexMatrix: shape mismatch in ") + op);
    }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols)
{
    require_shape(rows, cols);
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major))
{
    require_shape(rows, cols);
    if (data_.size() != rows * cols) {
        throw DimensionMismatch("ComplexMatrix: element count does not match shape");
    }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0)
{
    require_shape(rows_, cols_);
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) {
            throw DimensionMismatch("ComplexMatrix: ragged initializer");
        }
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n)
{
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> d)
{
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        m(i, i) = d[i];
    }
    return m;
}

ComplexMatrix ComplexMatrix::column(std::span<const cplx> v)
{
    return ComplexMatrix(v.size(), 1, std::vector<cplx>(v.begin(), v.end()));
}

const cplx& ComplexMatrix::at(std::size_t r, std::size_t c) const
{
    if (r >= rows_ || c >= cols_) {
        throw IndexOutOfRange("ComplexMatrix::at(" + std::to_string(r) + ", " +
                              std::to_string(c) + ")");
    }
    return (*this)(r, c);
}

ComplexMatrix ComplexMatrix::adjoint() const
{
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            out(c, r) = std::conj((*this)(r, c));
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::block(std::size_t r0, std::size_t c0, std::size_t nr,
                                   std::size_t nc) const
{
    if (r0 + nr > rows_ || c0 + nc > cols_) {
        throw IndexOutOfRange("ComplexMatrix::block out of range");
    }
    ComplexMatrix out(nr, nc);
    for (std::size_t r = 0; r < nr; ++r) {
        for (std::size_t c = 0; c < nc; ++c) {
            out(r, c) = (*this)(r0 + r, c0 + c);
        }
    }
    return out;
}

std::vector<cplx> ComplexMatrix::col(std::size_t c) const
{
    if (c >= cols_) {
        throw IndexOutOfRange("ComplexMatrix::col(" + std::to_string(c) + ")");
    }
    std::vector<cplx> v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        v[r] = (*this)(r, c);
    }
    return v;
}

double ComplexMatrix::frobenius_norm_sq() const
{
    double s = 0.0;
    for (const auto& z : data_) {
        s += std::norm(z);
    }
    return s;
}

double ComplexMatrix::frobenius_norm() const
{
    return std::sqrt(frobenius_norm_sq());
}

bool ComplexMatrix::is_finite() const noexcept
{
    for (const auto& z : data_) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            return false;
        }
    }
    return true;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o)
{
    require_same_shape(*this, o, "+=");
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] += o.data_[i];
    }
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o)
{
    require_same_shape(*this, o, "-=");
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] -= o.data_[i];
    }
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) noexcept
{
    for (auto& z : data_) {
        z *= s;
    }
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b)
{
    if (a.cols() != b.rows()) {
        throw DimensionMismatch("ComplexMatrix: inner dimensions differ in product");
    }
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < b.cols(); ++c) {
            cplx acc{};
            for (std::size_t k = 0; k < a.cols(); ++k) {
                acc += a(r, k) * b(k, c);
            }
            out(r, c) = acc;
        }
    }
    return out;
}

std::vector<cplx> operator*(const ComplexMatrix& a, std::span<const cplx> x)
{
    if (a.cols() != x.size()) {
        throw DimensionMismatch("ComplexMatrix: vector length differs from column count");
    }
    std::vector<cplx> y(a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        cplx acc{};
        for (std::size_t k = 0; k < a.cols(); ++k) {
            acc += a(r, k) * x[k];
        }
        y[r] = acc;
    }
    return y;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b)
{
    a += b;
    return a;
}

ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b)
{
    a -= b;
    return a;
}

ComplexMatrix operator*(cplx s, ComplexMatrix a)
{
    a *= s;
    return a;
}

double orthonormality_residual(const ComplexMatrix& a)
{
    return (a.adjoint() * a - ComplexMatrix::identity(a.cols())).frobenius_norm();
}

bool is_upper_triangular(const ComplexMatrix& a) noexcept
{
    for (std::size_t r = 1; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < r && c < a.cols(); ++c) {
            if (a(r, c) != cplx{}) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace gmdsim
