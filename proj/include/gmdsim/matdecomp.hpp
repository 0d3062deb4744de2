#pragma once

#include "gmdsim/complex_matrix.hpp"

#include <vector>

namespace gmdsim {

/// A = u · diag(s) · vᴴ with u (n×n) and v (m×m) unitary and s sorted
/// descending. Each right singular vector is phase-normalized so that its
/// largest-magnitude entry is real and positive.
struct SvdFactors {
    ComplexMatrix u;
    std::vector<double> s;
    ComplexMatrix v;
    int sweeps = 0;
};

/// A = q · r, economy size: q (n×m) has orthonormal columns, r (m×m) is
/// upper triangular with a real non-negative diagonal and exact zeros below.
struct QrFactors {
    ComplexMatrix q;
    ComplexMatrix r;
};

/// Geometric mean decomposition A = b · e · pᴴ. `e` is real upper
/// triangular and every diagonal entry equals the geometric mean of the
/// singular values of A.
struct GmdFactors {
    ComplexMatrix b;
    ComplexMatrix e;
    ComplexMatrix p;
};

struct SvdOptions {
    int max_sweeps = 60;
    double tolerance = 1e-12;
};

/// Relative pivot size below which QR/GMD report `RankDeficient`.
inline constexpr double kRankTolerance = 1e-12;

/// One-sided (Hestenes) Jacobi SVD of a tall matrix (rows ≥ cols).
/// Throws NonConvergence when `opts.max_sweeps` is exhausted.
SvdFactors svd(const ComplexMatrix& a, const SvdOptions& opts = {});

/// Householder economy QR (rows ≥ cols). Throws RankDeficient on a pivot
/// below kRankTolerance · ‖a‖_F.
QrFactors qr_economy(const ComplexMatrix& a);

/// GMD built from the SVD by a sequence of permutations and paired Givens
/// rotations, one diagonal entry fixed to the geometric mean per step.
GmdFactors gmd(const ComplexMatrix& a, const SvdOptions& opts = {});

/// Geometric mean of the given (positive) values, computed in log space.
double geometric_mean(const std::vector<double>& values);

}  // namespace gmdsim
