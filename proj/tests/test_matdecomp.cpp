#include "gmdsim/errors.hpp"
#include "gmdsim/matdecomp.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace gmdsim;
using testing::gaussian;
using testing::rel_diff;

namespace {

double recon_svd(const ComplexMatrix& a, const SvdFactors& f)
{
    const auto sig = ComplexMatrix::diagonal(f.s);
    const auto usv = f.u.block(0, 0, a.rows(), a.cols()) * sig * f.v.adjoint();
    return (a - usv).frobenius_norm() / a.frobenius_norm();
}

/// Eigenvalues of the 2×2 Hermitian Gramian aᴴa from its characteristic
/// polynomial, descending.
std::array<double, 2> gramian_roots(const ComplexMatrix& a)
{
    const auto g = a.adjoint() * a;
    const double p = g(0, 0).real();
    const double d = g(1, 1).real();
    const double off = std::norm(g(0, 1));
    const double mid = 0.5 * (p + d);
    const double disc = std::sqrt(0.25 * (p - d) * (p - d) + off);
    return {mid + disc, mid - disc};
}

}  // namespace

TEST_SUITE("matdecomp")
{
    TEST_CASE("svd of the identity")
    {
        const auto f = svd(ComplexMatrix::identity(2));
        CHECK(f.s[0] == doctest::Approx(1.0));
        CHECK(f.s[1] == doctest::Approx(1.0));
        const auto uv = f.u * f.v.adjoint();
        CHECK((uv - ComplexMatrix::identity(2)).frobenius_norm() <= 1e-12);
    }

    TEST_CASE("svd of diag(4, 1)")
    {
        const auto f = svd(ComplexMatrix{{4.0, 0.0}, {0.0, 1.0}});
        CHECK(f.s[0] == doctest::Approx(4.0).epsilon(1e-14));
        CHECK(f.s[1] == doctest::Approx(1.0).epsilon(1e-14));
    }

    TEST_CASE("svd sorts an ascending diagonal")
    {
        const auto f = svd(ComplexMatrix{{1.0, 0.0}, {0.0, 3.0}});
        CHECK(f.s[0] == doctest::Approx(3.0));
        CHECK(f.s[1] == doctest::Approx(1.0));
    }

    TEST_CASE("svd of a seeded 8x2 matches the Gramian characteristic roots")
    {
        Rng rng = make_stream(7, {1});
        const auto a = gaussian(rng, 8, 2);
        const auto f = svd(a);
        CHECK(recon_svd(a, f) <= 1e-10);
        const auto roots = gramian_roots(a);
        CHECK(rel_diff(f.s[0], std::sqrt(roots[0])) <= 1e-8);
        CHECK(rel_diff(f.s[1], std::sqrt(roots[1])) <= 1e-8);
    }

    TEST_CASE("svd agrees with an independent Jacobi SVD on random shapes")
    {
        Rng rng = make_stream(7, {2});
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t n = 1 + rng() % 16;
            const std::size_t m = 1 + rng() % std::min<std::size_t>(n, 4);
            const auto a = gaussian(rng, n, m);
            const auto f = svd(a);
            const auto oracle = testing::oracle_singular_values(a);
            REQUIRE(f.s.size() == oracle.size());
            for (std::size_t i = 0; i < oracle.size(); ++i) {
                CHECK(rel_diff(f.s[i], oracle[i]) <= 1e-10);
            }
            CHECK(recon_svd(a, f) <= 1e-10);
            CHECK(orthonormality_residual(f.u) <= 1e-10);
            CHECK(orthonormality_residual(f.v) <= 1e-10);
            CHECK(f.u.rows() == n);
            CHECK(f.u.cols() == n);
            CHECK(std::is_sorted(f.s.rbegin(), f.s.rend()));
        }
    }

    TEST_CASE("svd phase convention: largest entry of each right vector is real positive")
    {
        Rng rng = make_stream(7, {3});
        const auto f = svd(gaussian(rng, 6, 3));
        for (std::size_t c = 0; c < 3; ++c) {
            std::size_t best = 0;
            for (std::size_t r = 1; r < 3; ++r) {
                if (std::abs(f.v(r, c)) > std::abs(f.v(best, c))) {
                    best = r;
                }
            }
            CHECK(f.v(best, c).imag() == 0.0);
            CHECK(f.v(best, c).real() > 0.0);
        }
    }

    TEST_CASE("svd is bit-reproducible")
    {
        Rng rng = make_stream(7, {4});
        const auto a = gaussian(rng, 8, 4);
        const auto f1 = svd(a);
        const auto f2 = svd(a);
        CHECK(f1.u == f2.u);
        CHECK(f1.v == f2.v);
        CHECK(f1.s == f2.s);
    }

    TEST_CASE("svd errors")
    {
        CHECK_THROWS_AS(svd(ComplexMatrix(2, 3)), DimensionMismatch);
        ComplexMatrix bad(2, 2);
        bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(svd(bad), std::invalid_argument);
        Rng rng = make_stream(7, {5});
        const auto a = gaussian(rng, 8, 4);
        CHECK_THROWS_AS(svd(a, SvdOptions{1, 1e-12}), NonConvergence);
    }

    TEST_CASE("qr of the identity is exact")
    {
        const auto f = qr_economy(ComplexMatrix::identity(2));
        CHECK(f.q == ComplexMatrix::identity(2));
        CHECK(f.r == ComplexMatrix::identity(2));
    }

    TEST_CASE("qr fixed point: upper triangular with positive diagonal")
    {
        const ComplexMatrix a{{2.0, cplx{1.0, -1.0}, 0.5}, {0.0, 3.0, cplx{0.0, 2.0}}, {0.0, 0.0, 0.25}};
        const auto f = qr_economy(a);
        CHECK(f.q == ComplexMatrix::identity(3));
        CHECK(f.r == a);
    }

    TEST_CASE("qr of a seeded 4x2 preserves the determinant magnitude")
    {
        Rng rng = make_stream(7, {6});
        const auto a = gaussian(rng, 4, 2);
        const auto f = qr_economy(a);
        CHECK(rel_diff(testing::diag_abs_product(f.r), testing::product(svd(a).s)) <= 1e-9);
    }

    TEST_CASE("qr invariants on random shapes")
    {
        Rng rng = make_stream(7, {7});
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t n = 1 + rng() % 16;
            const std::size_t m = 1 + rng() % std::min<std::size_t>(n, 4);
            const auto a = gaussian(rng, n, m);
            const auto f = qr_economy(a);
            CHECK(f.q.rows() == n);
            CHECK(f.q.cols() == m);
            CHECK(is_upper_triangular(f.r));
            for (std::size_t i = 0; i < m; ++i) {
                CHECK(f.r(i, i).imag() == 0.0);
                CHECK(f.r(i, i).real() >= 0.0);
            }
            CHECK((a - f.q * f.r).frobenius_norm() <= 1e-10 * a.frobenius_norm());
            CHECK(orthonormality_residual(f.q) <= 1e-10);
            // |det| agrees with an independent Householder QR.
            Eigen::HouseholderQR<Eigen::MatrixXcd> hq(testing::to_eigen(a));
            const Eigen::MatrixXcd r = hq.matrixQR().topRows(static_cast<Eigen::Index>(m))
                                           .triangularView<Eigen::Upper>();
            for (std::size_t i = 0; i < m; ++i) {
                const auto ii = static_cast<Eigen::Index>(i);
                CHECK(rel_diff(f.r(i, i).real(), std::abs(r(ii, ii))) <= 1e-10);
            }
        }
    }

    TEST_CASE("qr rejects rank-deficient input")
    {
        CHECK_THROWS_AS(qr_economy(ComplexMatrix(3, 2)), RankDeficient);
        const ComplexMatrix dup{{1.0, 1.0}, {2.0, 2.0}, {cplx{0, 1}, cplx{0, 1}}};
        CHECK_THROWS_AS(qr_economy(dup), RankDeficient);
        CHECK_THROWS_AS(qr_economy(ComplexMatrix(2, 3)), DimensionMismatch);
    }

    TEST_CASE("gmd of the identity")
    {
        const auto f = gmd(ComplexMatrix::identity(2));
        CHECK(f.e(0, 0).real() == doctest::Approx(1.0));
        CHECK(f.e(1, 1).real() == doctest::Approx(1.0));
        CHECK(std::abs(f.e(0, 1)) <= 1e-15);
    }

    TEST_CASE("gmd of diag(4, 1)")
    {
        const auto f = gmd(ComplexMatrix{{4.0, 0.0}, {0.0, 1.0}});
        CHECK(f.e(0, 0).real() == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(f.e(1, 1).real() == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(std::abs(f.e(0, 1)) == doctest::Approx(3.0).epsilon(1e-14));
        // Frobenius conservation: 4 + 4 + e12² = 16 + 1.
        CHECK(f.e.frobenius_norm_sq() == doctest::Approx(17.0).epsilon(1e-14));
    }

    TEST_CASE("gmd of a seeded 8x2")
    {
        Rng rng = make_stream(7, {8});
        const auto a = gaussian(rng, 8, 2);
        const auto f = gmd(a);
        const auto s = svd(a).s;
        CHECK(rel_diff(f.e(0, 0).real() * f.e(1, 1).real(), testing::product(s)) <= 1e-9);
        CHECK(rel_diff(f.e(0, 0).real(), f.e(1, 1).real()) <= 1e-9);
    }

    TEST_CASE("gmd invariants on random shapes")
    {
        Rng rng = make_stream(7, {9});
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t n = 1 + rng() % 16;
            const std::size_t m = 1 + rng() % std::min<std::size_t>(n, 4);
            const auto a = gaussian(rng, n, m);
            const auto f = gmd(a);
            const double gm = geometric_mean(testing::oracle_singular_values(a));
            CHECK(f.b.rows() == n);
            CHECK(f.b.cols() == m);
            CHECK((a - f.b * f.e * f.p.adjoint()).frobenius_norm() <= 1e-9 * a.frobenius_norm());
            CHECK(orthonormality_residual(f.b) <= 1e-9);
            CHECK(orthonormality_residual(f.p) <= 1e-9);
            CHECK(is_upper_triangular(f.e));
            CHECK(rel_diff(f.e.frobenius_norm(), a.frobenius_norm()) <= 1e-9);
            for (std::size_t i = 0; i < m; ++i) {
                CHECK(rel_diff(f.e(i, i).real(), gm) <= 1e-9);
                for (std::size_t j = 0; j < m; ++j) {
                    CHECK(f.e(i, j).imag() == 0.0);
                }
            }
        }
    }

    TEST_CASE("gmd rejects rank-deficient input")
    {
        const ComplexMatrix dup{{1.0, 2.0}, {2.0, 4.0}, {3.0, 6.0}};
        CHECK_THROWS_AS(gmd(dup), RankDeficient);
    }

    TEST_CASE("geometric mean")
    {
        CHECK(geometric_mean({4.0, 1.0}) == doctest::Approx(2.0));
        CHECK(geometric_mean({2.0, 2.0, 2.0}) == doctest::Approx(2.0));
        CHECK_THROWS_AS(geometric_mean({}), std::invalid_argument);
    }
}

TEST_SUITE("complex_matrix")
{
    TEST_CASE("construction and shape errors")
    {
        CHECK_THROWS_AS(ComplexMatrix(0, 2), DimensionMismatch);
        CHECK_THROWS_AS(ComplexMatrix(2, 2, std::vector<cplx>(3)), DimensionMismatch);
        CHECK_THROWS_AS((ComplexMatrix{{1.0, 2.0}, {3.0}}), DimensionMismatch);
        const ComplexMatrix a{{1.0, 2.0}, {3.0, 4.0}};
        CHECK(a(1, 0) == cplx{3.0});
        CHECK_THROWS_AS(a.at(2, 0), IndexOutOfRange);
        CHECK_THROWS_AS(a.col(2), IndexOutOfRange);
        CHECK_THROWS_AS(a.block(1, 1, 2, 1), IndexOutOfRange);
        CHECK_THROWS_AS(a * ComplexMatrix(3, 1), DimensionMismatch);
    }

    TEST_CASE("adjoint and products")
    {
        const ComplexMatrix a{{cplx{1, 1}, 2.0}, {0.0, cplx{0, -3}}};
        const auto ah = a.adjoint();
        CHECK(ah(0, 0) == cplx{1, -1});
        CHECK(ah(1, 1) == cplx{0, 3});
        CHECK(ah(1, 0) == cplx{2, 0});
        const auto p = a * ComplexMatrix::identity(2);
        CHECK(p == a);
        const std::vector<cplx> x{1.0, 1.0};
        const auto y = a * std::span<const cplx>(x);
        CHECK(y[0] == cplx{3, 1});
        CHECK(y[1] == cplx{0, -3});
        CHECK(orthonormality_residual(ComplexMatrix::identity(3)) == 0.0);
        CHECK(a.frobenius_norm_sq() == doctest::Approx(2.0 + 4.0 + 9.0));
    }

    TEST_CASE("upper triangular check is exact")
    {
        ComplexMatrix t{{1.0, 2.0}, {0.0, 3.0}};
        CHECK(is_upper_triangular(t));
        t(1, 0) = 1e-300;
        CHECK_FALSE(is_upper_triangular(t));
    }
}
