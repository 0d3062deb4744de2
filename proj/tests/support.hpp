#pragma once

#include "gmdsim/complex_matrix.hpp"
#include "gmdsim/random.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

namespace testing {

using gmdsim::ComplexMatrix;
using gmdsim::cplx;

inline ComplexMatrix gaussian(gmdsim::Rng& rng, std::size_t rows, std::size_t cols)
{
    ComplexMatrix a(rows, cols);
    for (auto& z : a.data()) {
        z = gmdsim::complex_gaussian(rng);
    }
    return a;
}

inline Eigen::MatrixXcd to_eigen(const ComplexMatrix& a)
{
    Eigen::MatrixXcd m(a.rows(), a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = a(r, c);
        }
    }
    return m;
}

/// Singular values from Eigen's two-sided Jacobi SVD, descending.
inline std::vector<double> oracle_singular_values(const ComplexMatrix& a)
{
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(a));
    const auto& s = svd.singularValues();
    return {s.data(), s.data() + s.size()};
}

inline double rel_diff(double a, double b)
{
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

inline double product(const std::vector<double>& v)
{
    double p = 1.0;
    for (double x : v) {
        p *= x;
    }
    return p;
}

inline double diag_abs_product(const ComplexMatrix& r)
{
    double p = 1.0;
    for (std::size_t i = 0; i < std::min(r.rows(), r.cols()); ++i) {
        p *= std::abs(r(i, i));
    }
    return p;
}

}  // namespace testing
