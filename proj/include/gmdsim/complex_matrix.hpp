#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace gmdsim {

using cplx = std::complex<double>;

/// Dense complex matrix, row-major.
///
/// Shapes are fixed at construction and must be at least 1x1. Element
/// access is unchecked; use `at()` for bounds-checked reads.
class ComplexMatrix {
public:
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> row_major);
    ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(std::span<const double> d);
    static ComplexMatrix column(std::span<const cplx> v);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    cplx& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
    const cplx& at(std::size_t r, std::size_t c) const;

    std::span<const cplx> data() const noexcept { return data_; }
    std::span<cplx> data() noexcept { return data_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    std::vector<cplx> col(std::size_t c) const;

    double frobenius_norm() const;
    double frobenius_norm_sq() const;
    bool is_finite() const noexcept;

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(cplx s) noexcept;

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<cplx> data_;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
std::vector<cplx> operator*(const ComplexMatrix& a, std::span<const cplx> x);
ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, ComplexMatrix a);

/// ‖aᴴa − I‖_F, the departure of the columns of `a` from orthonormality.
double orthonormality_residual(const ComplexMatrix& a);

/// True when all entries strictly below the diagonal are exactly zero.
bool is_upper_triangular(const ComplexMatrix& a) noexcept;

}  // namespace gmdsim
