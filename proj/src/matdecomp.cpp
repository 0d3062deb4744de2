#include "gmdsim/matdecomp.hpp"

#include "gmdsim/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gmdsim {

namespace {

void require_tall_finite(const ComplexMatrix& a, const char* op)
{
    if (a.rows() < a.cols()) {
        throw DimensionMismatch(std::string(op) + ": requires rows >= cols, got " +
                                std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
    if (!a.is_finite()) {
        throw std::invalid_argument(std::string(op) + ": input contains NaN or Inf");
    }
}

double column_norm_sq(const ComplexMatrix& a, std::size_t c)
{
    double s = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        s += std::norm(a(r, c));
    }
    return s;
}

// Applies [x y] <- [x, conj(phase)*y] * [[c, s], [-s, c]] to columns p, q.
void rotate_columns(ComplexMatrix& a, std::size_t p, std::size_t q, double c, double s,
                    cplx phase_conj)
{
    for (std::size_t r = 0; r < a.rows(); ++r) {
        const cplx x = a(r, p);
        const cplx y = phase_conj * a(r, q);
        a(r, p) = c * x - s * y;
        a(r, q) = s * x + c * y;
    }
}

// Extends the orthonormal columns `filled` of u to a full basis, trying unit
// vectors in order of largest residual after projection.
void complete_basis(ComplexMatrix& u, std::vector<bool> filled)
{
    const std::size_t n = u.rows();
    for (std::size_t col = 0; col < n; ++col) {
        if (filled[col]) {
            continue;
        }
        std::vector<cplx> best;
        double best_norm = -1.0;
        for (std::size_t cand = 0; cand < n; ++cand) {
            std::vector<cplx> v(n);
            v[cand] = 1.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t j = 0; j < n; ++j) {
                    if (!filled[j]) {
                        continue;
                    }
                    cplx dot{};
                    for (std::size_t r = 0; r < n; ++r) {
                        dot += std::conj(u(r, j)) * v[r];
                    }
                    for (std::size_t r = 0; r < n; ++r) {
                        v[r] -= dot * u(r, j);
                    }
                }
            }
            double nv = 0.0;
            for (const auto& z : v) {
                nv += std::norm(z);
            }
            if (nv > best_norm) {
                best_norm = nv;
                best = std::move(v);
            }
        }
        const double scale = 1.0 / std::sqrt(best_norm);
        for (std::size_t r = 0; r < n; ++r) {
            u(r, col) = best[r] * scale;
        }
        filled[col] = true;
    }
}

}  // namespace

double geometric_mean(const std::vector<double>& values)
{
    if (values.empty()) {
        throw std::invalid_argument("geometric_mean: empty input");
    }
    double log_sum = 0.0;
    for (double v : values) {
        log_sum += std::log(v);
    }
    return std::exp(log_sum / static_cast<double>(values.size()));
}

SvdFactors svd(const ComplexMatrix& a, const SvdOptions& opts)
{
    require_tall_finite(a, "svd");
    const std::size_t n = a.rows();
    const std::size_t m = a.cols();

    ComplexMatrix w = a;
    ComplexMatrix v = ComplexMatrix::identity(m);

    int sweep = 0;
    bool converged = false;
    while (!converged) {
        if (sweep >= opts.max_sweeps) {
            throw NonConvergence("svd: no convergence after " + std::to_string(opts.max_sweeps) +
                                 " sweeps");
        }
        ++sweep;
        converged = true;
        for (std::size_t p = 0; p + 1 < m; ++p) {
            for (std::size_t q = p + 1; q < m; ++q) {
                const double alpha = column_norm_sq(w, p);
                const double beta = column_norm_sq(w, q);
                cplx gamma{};
                for (std::size_t r = 0; r < n; ++r) {
                    gamma += std::conj(w(r, p)) * w(r, q);
                }
                const double g = std::abs(gamma);
                if (g == 0.0 || g <= opts.tolerance * std::sqrt(alpha * beta)) {
                    continue;
                }
                converged = false;
                const cplx phase_conj = std::conj(gamma) / g;
                const double zeta = (beta - alpha) / (2.0 * g);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                rotate_columns(w, p, q, c, s, phase_conj);
                rotate_columns(v, p, q, c, s, phase_conj);
            }
        }
    }

    std::vector<double> norms(m);
    for (std::size_t j = 0; j < m; ++j) {
        norms[j] = std::sqrt(column_norm_sq(w, j));
    }
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return norms[x] > norms[y]; });

    SvdFactors out{ComplexMatrix(n, n), std::vector<double>(m), ComplexMatrix(m, m), sweep};
    const double smax = norms[order[0]];
    const double negligible = smax * static_cast<double>(n) * 1e-15;
    std::vector<bool> filled(n, false);
    for (std::size_t j = 0; j < m; ++j) {
        const std::size_t src = order[j];
        const double sigma = norms[src];
        out.s[j] = sigma;

        // phase: largest-magnitude entry of v_j becomes real positive
        std::size_t k = 0;
        for (std::size_t r = 1; r < m; ++r) {
            if (std::abs(v(r, src)) > std::abs(v(k, src))) {
                k = r;
            }
        }
        const double mag = std::abs(v(k, src));
        const cplx ph_conj = std::conj(v(k, src)) / mag;
        for (std::size_t r = 0; r < m; ++r) {
            out.v(r, j) = v(r, src) * ph_conj;
        }
        out.v(k, j) = mag;

        if (sigma > negligible && sigma > 0.0) {
            for (std::size_t r = 0; r < n; ++r) {
                out.u(r, j) = w(r, src) * ph_conj / sigma;
            }
            filled[j] = true;
        }
    }
    complete_basis(out.u, std::move(filled));
    return out;
}

QrFactors qr_economy(const ComplexMatrix& a)
{
    require_tall_finite(a, "qr_economy");
    const std::size_t n = a.rows();
    const std::size_t m = a.cols();
    const double scale = a.frobenius_norm();
    if (scale == 0.0) {
        throw RankDeficient("qr_economy: zero matrix");
    }

    ComplexMatrix work = a;
    // reflector k acts on rows k..n-1; empty means identity
    std::vector<std::vector<cplx>> reflectors(m);

    for (std::size_t k = 0; k < m; ++k) {
        double tail_sq = 0.0;
        for (std::size_t r = k + 1; r < n; ++r) {
            tail_sq += std::norm(work(r, k));
        }
        const cplx head = work(k, k);
        const double xnorm = std::sqrt(std::norm(head) + tail_sq);
        if (xnorm <= kRankTolerance * scale) {
            throw RankDeficient("qr_economy: zero pivot in column " + std::to_string(k));
        }
        if (tail_sq == 0.0) {
            continue;
        }
        const double head_abs = std::abs(head);
        const cplx unit = head_abs == 0.0 ? cplx{1.0} : head / head_abs;
        const cplx beta = -unit * xnorm;

        std::vector<cplx> vk(n - k);
        vk[0] = head - beta;
        for (std::size_t r = k + 1; r < n; ++r) {
            vk[r - k] = work(r, k);
        }
        double vnorm_sq = 0.0;
        for (const auto& z : vk) {
            vnorm_sq += std::norm(z);
        }
        for (std::size_t c = k + 1; c < m; ++c) {
            cplx dot{};
            for (std::size_t r = k; r < n; ++r) {
                dot += std::conj(vk[r - k]) * work(r, c);
            }
            const cplx f = 2.0 * dot / vnorm_sq;
            for (std::size_t r = k; r < n; ++r) {
                work(r, c) -= f * vk[r - k];
            }
        }
        work(k, k) = beta;
        for (std::size_t r = k + 1; r < n; ++r) {
            work(r, k) = 0.0;
        }
        vk.push_back(vnorm_sq);  // stash |v|^2 in the tail slot
        reflectors[k] = std::move(vk);
    }

    ComplexMatrix q(n, m);
    for (std::size_t j = 0; j < m; ++j) {
        q(j, j) = 1.0;
    }
    for (std::size_t kk = m; kk-- > 0;) {
        const auto& vk = reflectors[kk];
        if (vk.empty()) {
            continue;
        }
        const double vnorm_sq = vk.back().real();
        for (std::size_t c = 0; c < m; ++c) {
            cplx dot{};
            for (std::size_t r = kk; r < n; ++r) {
                dot += std::conj(vk[r - kk]) * q(r, c);
            }
            const cplx f = 2.0 * dot / vnorm_sq;
            for (std::size_t r = kk; r < n; ++r) {
                q(r, c) -= f * vk[r - kk];
            }
        }
    }

    ComplexMatrix r(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        const cplx d = work(i, i);
        const double mag = std::abs(d);
        const cplx ph = d / mag;
        const cplx ph_conj = std::conj(ph);
        r(i, i) = mag;
        for (std::size_t c = i + 1; c < m; ++c) {
            r(i, c) = ph_conj * work(i, c);
        }
        if (ph != cplx{1.0}) {
            for (std::size_t row = 0; row < n; ++row) {
                q(row, i) *= ph;
            }
        }
    }
    return {std::move(q), std::move(r)};
}

GmdFactors gmd(const ComplexMatrix& a, const SvdOptions& opts)
{
    SvdFactors f = svd(a, opts);
    const std::size_t n = a.rows();
    const std::size_t m = a.cols();
    if (f.s[0] == 0.0 || f.s[m - 1] <= kRankTolerance * f.s[0]) {
        throw RankDeficient("gmd: matrix is numerically rank deficient");
    }
    const double gm = geometric_mean(f.s);

    ComplexMatrix b = f.u.block(0, 0, n, m);
    ComplexMatrix p = std::move(f.v);
    std::vector<std::vector<double>> e(m, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        e[i][i] = f.s[i];
    }

    auto swap_cols = [](ComplexMatrix& x, std::size_t i, std::size_t j) {
        for (std::size_t r = 0; r < x.rows(); ++r) {
            std::swap(x(r, i), x(r, j));
        }
    };

    for (std::size_t k = 0; k + 1 < m; ++k) {
        const double d1 = e[k][k];
        // pick the partner that brackets the geometric mean together with d1
        std::size_t partner = k + 1;
        for (std::size_t j = k + 2; j < m; ++j) {
            const bool better = d1 >= gm ? e[j][j] < e[partner][partner]
                                         : e[j][j] > e[partner][partner];
            if (better) {
                partner = j;
            }
        }
        if (partner != k + 1) {
            // trailing block is diagonal, so swapping the diagonal entries is the full permutation
            std::swap(e[k + 1][k + 1], e[partner][partner]);
            swap_cols(b, k + 1, partner);
            swap_cols(p, k + 1, partner);
        }
        const double d2 = e[k + 1][k + 1];

        double c = 1.0;
        double s = 0.0;
        if (d1 != d2) {
            const double c_sq = std::clamp((gm * gm - d2 * d2) / (d1 * d1 - d2 * d2), 0.0, 1.0);
            c = std::sqrt(c_sq);
            s = std::sqrt(1.0 - c_sq);
        }

        e[k][k] = gm;
        e[k][k + 1] = s * c * (d2 * d2 - d1 * d1) / gm;
        e[k + 1][k + 1] = d1 * d2 / gm;
        for (std::size_t i = 0; i < k; ++i) {
            const double x = e[i][k];
            const double y = e[i][k + 1];
            e[i][k] = c * x + s * y;
            e[i][k + 1] = -s * x + c * y;
        }
        const double l11 = c * d1 / gm;
        const double l21 = s * d2 / gm;
        for (std::size_t r = 0; r < n; ++r) {
            const cplx x = b(r, k);
            const cplx y = b(r, k + 1);
            b(r, k) = l11 * x + l21 * y;
            b(r, k + 1) = -l21 * x + l11 * y;
        }
        for (std::size_t r = 0; r < m; ++r) {
            const cplx x = p(r, k);
            const cplx y = p(r, k + 1);
            p(r, k) = c * x + s * y;
            p(r, k + 1) = -s * x + c * y;
        }
    }

    ComplexMatrix em(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) {
            em(i, j) = e[i][j];
        }
    }
    return {std::move(b), std::move(em), std::move(p)};
}

}  // namespace gmdsim
