#include "gmdsim/sim.hpp"

#include "gmdsim/codebook.hpp"
#include "gmdsim/errors.hpp"
#include "gmdsim/link.hpp"
#include "gmdsim/matdecomp.hpp"
#include "gmdsim/random.hpp"
#include "gmdsim/scheduler.hpp"
#include "gmdsim/schemes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

namespace gmdsim {

namespace {

constexpr std::uint64_t kSelftestCase = static_cast<std::uint64_t>(CaseId::Selftest);

enum Stream : std::uint64_t {
    kFactorStream = 1,
    kPipelineStream,
    kDetectorStream,
    kSchedulerStream,
    kCodebookProbeStream,
};

ComplexMatrix gaussian_matrix(Rng& rng, std::size_t rows, std::size_t cols)
{
    ComplexMatrix a(rows, cols);
    for (auto& z : a.data()) {
        z = complex_gaussian(rng);
    }
    return a;
}

double max_of(const std::vector<double>& v)
{
    return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

UserChannel seeded_user(const SimConfig& cfg, std::uint64_t stream, std::size_t i)
{
    const auto chan = cfg.channel();
    for (std::uint64_t attempt = 0;; ++attempt) {
        Rng rng = make_stream(cfg.seed, {kSelftestCase, stream, i, attempt});
        auto user = UserChannel::from(draw_channel(rng, chan));
        try {
            (void)gmd(user.stacked);
            return user;
        } catch (const RankDeficient&) {
            if (attempt > 64) {
                throw;
            }
        }
    }
}

struct FactorResiduals {
    double reconstruction = 0.0;
    double unitarity = 0.0;
    double geo_mean = 0.0;
};

FactorResiduals factor_residuals(const ComplexMatrix& a)
{
    const double scale = a.frobenius_norm();
    const std::size_t n = a.rows();
    const std::size_t m = a.cols();
    FactorResiduals out;

    const SvdFactors s = svd(a);
    const ComplexMatrix sig = ComplexMatrix::diagonal(s.s);
    const ComplexMatrix usv = s.u.block(0, 0, n, m) * sig * s.v.adjoint();
    out.reconstruction = std::max(out.reconstruction, (a - usv).frobenius_norm() / scale);
    out.unitarity = std::max({orthonormality_residual(s.u), orthonormality_residual(s.v)});

    const QrFactors q = qr_economy(a);
    out.reconstruction = std::max(out.reconstruction, (a - q.q * q.r).frobenius_norm() / scale);
    out.unitarity = std::max(out.unitarity, orthonormality_residual(q.q));
    if (!is_upper_triangular(q.r)) {
        out.reconstruction = std::numeric_limits<double>::infinity();
    }

    const GmdFactors g = gmd(a);
    out.reconstruction =
        std::max(out.reconstruction, (a - g.b * g.e * g.p.adjoint()).frobenius_norm() / scale);
    out.unitarity = std::max({out.unitarity, orthonormality_residual(g.b),
                              orthonormality_residual(g.p)});
    const double gm = geometric_mean(s.s);
    for (std::size_t i = 0; i < m; ++i) {
        out.geo_mean = std::max(out.geo_mean, std::abs(g.e(i, i) - gm) / gm);
    }
    return out;
}

/// Exhaustive ML over all 4^M QPSK vectors; ties go to the smaller index
/// with the last stream most significant.
std::vector<unsigned> exhaustive_ml(const ComplexMatrix& r_mat, std::span<const cplx> r, double rho)
{
    const std::size_t m = r_mat.rows();
    const std::size_t total = std::size_t{1} << (2 * m);
    const double a = std::sqrt(rho);
    double best = std::numeric_limits<double>::infinity();
    std::vector<unsigned> best_idx(m);
    std::vector<unsigned> idx(m);
    for (std::size_t code = 0; code < total; ++code) {
        for (std::size_t j = 0; j < m; ++j) {
            idx[j] = static_cast<unsigned>((code >> (2 * j)) & 3u);
        }
        double d = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            cplx acc{};
            for (std::size_t j = i; j < m; ++j) {
                acc += r_mat(i, j) * qpsk_symbol(idx[j]);
            }
            d += std::norm(r[i] - a * acc);
        }
        if (d < best) {
            best = d;
            best_idx = idx;
        }
    }
    return best_idx;
}

PropertyResult factorization_suite(const SimConfig& cfg, bool geo_mean)
{
    constexpr std::size_t kInstances = 1000;
    std::vector<FactorResiduals> res(kInstances);
    parallel_for(kInstances, cfg.workers, [&](std::size_t i) {
        Rng rng = make_stream(cfg.seed, {kSelftestCase, kFactorStream, i});
        const auto rows = static_cast<std::size_t>(rng() % 16) + 1;
        const auto cols = static_cast<std::size_t>(rng() % std::min<std::size_t>(rows, 4)) + 1;
        res[i] = factor_residuals(gaussian_matrix(rng, rows, cols));
    });
    double worst = 0.0;
    for (const auto& r : res) {
        worst = std::max(worst, geo_mean ? r.geo_mean : std::max(r.reconstruction, r.unitarity));
    }
    if (geo_mean) {
        return {"gmd_geometric_mean", "max_rel_error", worst, kInstances, worst <= 1e-9};
    }
    return {"factorization_residuals", "max_residual", worst, kInstances, worst <= 1e-9};
}

/// Per-subcarrier pipeline figures for the first `count` (user, q) pairs.
struct PipelineSample {
    double det_gmd = 0.0;
    double det_qrd = 0.0;
    std::array<double, 3> ratio{};  // C/T at ρ = 1e3, 1e4, 1e6
    double excess = 0.0;            // max(0, C − T) over ρ
};

std::vector<PipelineSample> pipeline_samples(const SimConfig& cfg, std::size_t count)
{
    const std::size_t users = (count + cfg.Q - 1) / cfg.Q;
    const auto cb = BfmCodebook::infinite(cfg.M);
    std::vector<PipelineSample> out(count);
    constexpr std::array<double, 3> kRho = {1e3, 1e4, 1e6};
    parallel_for(users, cfg.workers, [&](std::size_t k) {
        const UserChannel user = seeded_user(cfg, kPipelineStream, k);
        auto ps_gmd = evaluate_ps_gmd(user.stacked, user.freq, 1.0, cb);
        auto ps_qrd = evaluate_ps_qrd(user.stacked, user.freq, 1.0, cb);
        for (std::size_t q = 0; q < cfg.Q && k * cfg.Q + q < count; ++q) {
            auto& s = out[k * cfg.Q + q];
            const auto sv = svd(user.freq.g[q]).s;
            const double lam = std::accumulate(sv.begin(), sv.end(), 1.0, std::multiplies<>());
            auto diag_prod = [](const ComplexMatrix& r) {
                double p = 1.0;
                for (std::size_t m = 0; m < r.rows(); ++m) {
                    p *= std::abs(r(m, m));
                }
                return p;
            };
            s.det_gmd = std::abs(diag_prod(ps_gmd.links[q].triangular) - lam) / lam;
            s.det_qrd = std::abs(diag_prod(ps_qrd.links[q].triangular) - lam) / lam;
            for (std::size_t j = 0; j < kRho.size(); ++j) {
                double t = 0.0;
                for (double x : sv) {
                    t += std::log2(1.0 + kRho[j] * x * x);
                }
                const double c = throughput_from_r(ps_gmd.links[q].triangular, kRho[j]);
                s.ratio[j] = c / t;
                s.excess = std::max(s.excess, c - t);
            }
        }
    });
    return out;
}

PropertyResult determinant_identity(const SimConfig& cfg)
{
    const auto samples = pipeline_samples(cfg, 1000);
    double worst = 0.0;
    for (const auto& s : samples) {
        worst = std::max({worst, s.det_gmd, s.det_qrd});
    }
    return {"determinant_identity", "max_rel_error", worst, samples.size(), worst <= 1e-9};
}

std::vector<PropertyResult> asymptotic_ratio(const SimConfig& cfg)
{
    const auto samples = pipeline_samples(cfg, 200);
    std::array<double, 3> mean{};
    double excess = 0.0;
    for (const auto& s : samples) {
        for (std::size_t j = 0; j < 3; ++j) {
            mean[j] += s.ratio[j] / static_cast<double>(samples.size());
        }
        excess = std::max(excess, s.excess);
    }
    const bool monotone = mean[0] <= mean[1] && mean[1] <= mean[2];
    return {
        {"asymptotic_ratio", "mean_ratio_rho1e6", mean[2], samples.size(),
         monotone && mean[2] >= 0.99},
        {"rate_dominance", "max_excess", excess, samples.size(), excess <= 1e-12},
    };
}

PropertyResult kronecker_parseval(const SimConfig& cfg, bool parseval)
{
    constexpr std::size_t kInstances = 200;
    std::vector<double> err(kInstances);
    parallel_for(kInstances, cfg.workers, [&](std::size_t i) {
        Rng rng = make_stream(cfg.seed, {kSelftestCase, kPipelineStream, 1u << 20, i});
        const auto ch = draw_channel(rng, cfg.channel());
        const auto fc = freq_channel(ch, cfg.Q);
        const auto h = stack_channel(ch);
        if (parseval) {
            double sum = 0.0;
            for (const auto& g : fc.g) {
                sum += g.frobenius_norm_sq();
            }
            const double expect = static_cast<double>(cfg.Q) * h.frobenius_norm_sq();
            err[i] = std::abs(sum - expect) / expect;
        } else {
            double worst = 0.0;
            for (std::size_t q = 0; q < cfg.Q; ++q) {
                const auto w = selection_matrix(q, cfg.Q, cfg.N, cfg.L);
                worst = std::max(worst, (w * h - fc.g[q]).frobenius_norm());
            }
            err[i] = worst;
        }
    });
    const double worst = max_of(err);
    if (parseval) {
        return {"parseval", "max_rel_error", worst, kInstances, worst <= 1e-9};
    }
    return {"kronecker_consistency", "max_abs_error", worst, kInstances, worst == 0.0};
}

PropertyResult detector_oracle(const SimConfig& cfg)
{
    constexpr std::size_t kInstances = 2000;
    constexpr std::size_t kStreams = 2;
    const DetectorConfig full{std::size_t{1} << (2 * kStreams)};
    std::vector<double> mismatch(kInstances);
    parallel_for(kInstances, cfg.workers, [&](std::size_t i) {
        Rng rng = make_stream(cfg.seed, {kSelftestCase, kDetectorStream, i});
        const auto r_mat = qr_economy(gaussian_matrix(rng, kStreams, kStreams)).r;
        const double rho = std::pow(10.0, static_cast<double>(i % 5) / 2.0);
        std::vector<cplx> s(kStreams);
        for (auto& z : s) {
            z = qpsk_symbol(static_cast<unsigned>(rng() & 3u));
        }
        auto r = r_mat * std::span<const cplx>(s);
        for (auto& z : r) {
            z = std::sqrt(rho) * z + complex_gaussian(rng);
        }
        mismatch[i] = qrdm_detect_indices(r_mat, r, rho, full) == exhaustive_ml(r_mat, r, rho)
                          ? 0.0
                          : 1.0;
    });
    const double bad = std::accumulate(mismatch.begin(), mismatch.end(), 0.0);
    return {"qrdm_ml_equivalence", "mismatches", bad, kInstances, bad == 0.0};
}

PropertyResult feedback_ordering(const SimConfig& cfg)
{
    std::size_t instances = 0;
    std::size_t violations = 0;
    for (std::size_t q : {8u, 16u, 64u, 256u}) {
        for (std::size_t g = 1; g <= q; g *= 2) {
            for (int b = 0; b <= 16; ++b) {
                for (std::size_t m = 1; m <= 4; ++m) {
                    ++instances;
                    const int bps = cfg.bits_per_scalar;
                    const auto pc = feedback_cost(SchemeId::PcGmd, q, g, b, bps, m);
                    const auto ps = feedback_cost(SchemeId::PsGmd, q, g, b, bps, m);
                    const auto eb = feedback_cost(SchemeId::PsEb, q, g, b, bps, m);
                    const bool ok = pc.total_bits <= ps.total_bits &&
                                    ps.total_bits <= eb.total_bits &&
                                    ps.bfm_bits == static_cast<std::uint64_t>(b) &&
                                    eb.bfm_bits == q * static_cast<std::uint64_t>(b);
                    violations += ok ? 0 : 1;
                }
            }
        }
    }
    return {"feedback_budget_ordering", "violations", static_cast<double>(violations), instances,
            violations == 0};
}

std::vector<PropertyResult> scheduling_properties(const SimConfig& cfg)
{
    constexpr std::size_t kInstances = 50;
    const double rho = 10.0;
    const auto cb = BfmCodebook::infinite(cfg.M);
    const std::size_t k_max = std::max<std::size_t>(cfg.K, 2);
    std::vector<double> mono(kInstances);
    std::vector<double> cluster(kInstances);
    parallel_for(kInstances, cfg.workers, [&](std::size_t i) {
        std::vector<FeedbackReport> ps;
        std::vector<FeedbackReport> pc;
        std::vector<std::vector<double>> ps_rates;
        double cluster_err = 0.0;
        const auto plan = ClusterPlan::make(cfg.Q, cfg.G_grid.front());
        for (std::size_t k = 0; k < k_max; ++k) {
            const UserChannel u = seeded_user(cfg, kSchedulerStream, i * k_max + k);
            auto a = evaluate_ps_gmd(u.stacked, u.freq, rho, cb);
            auto b = evaluate_pc_gmd(u.stacked, u.freq, plan, rho, cb);
            for (std::size_t g = 0; g < plan.clusters; ++g) {
                double sum = 0.0;
                for (std::size_t q : plan.index_sets[g]) {
                    sum += a.report.rate_scalars[q];
                }
                const double avg = sum / static_cast<double>(plan.cluster_size);
                cluster_err = std::max(cluster_err, std::abs(avg - b.report.rate_scalars[g]));
            }
            ps.push_back(std::move(a.report));
        }
        const auto half = std::span<const FeedbackReport>(ps).first(k_max / 2);
        const double small = system_throughput(schedule(half));
        const double large = system_throughput(schedule(ps));
        mono[i] = small > large ? 1.0 : 0.0;
        cluster[i] = cluster_err;
    });
    const double violations = std::accumulate(mono.begin(), mono.end(), 0.0);
    const double worst = max_of(cluster);
    return {
        {"multiuser_monotonicity", "violations", violations, kInstances, violations == 0.0},
        {"cluster_rate_consistency", "max_abs_error", worst, kInstances, worst <= 1e-12},
    };
}

PropertyResult codebook_nesting(const SimConfig& cfg)
{
    constexpr std::size_t kInstances = 100;
    constexpr int kBits = 8;
    const std::uint64_t seed = substream_seed(cfg.seed, {kSelftestCase, kCodebookProbeStream});
    const auto big = generate_codebook(kBits, cfg.M, seed);
    std::vector<double> violations(kInstances);
    parallel_for(kInstances, cfg.workers, [&](std::size_t i) {
        Rng rng = make_stream(cfg.seed, {kSelftestCase, kCodebookProbeStream, i});
        const auto p = qr_economy(gaussian_matrix(rng, cfg.M, cfg.M)).q;
        double prev = std::numeric_limits<double>::infinity();
        double bad = 0.0;
        for (int b = 0; b <= kBits; ++b) {
            const std::vector<ComplexMatrix> prefix(big.entries().begin(),
                                                    big.entries().begin() + (std::size_t{1} << b));
            const BfmCodebook cb(b, cfg.M, seed, prefix);
            const double metric = select_bfm(p, cb).metric;
            if (metric > prev) {
                bad += 1.0;
            }
            prev = metric;
        }
        violations[i] = bad;
    });
    const double bad = std::accumulate(violations.begin(), violations.end(), 0.0);
    return {"codebook_nesting", "violations", bad, kInstances, bad == 0.0};
}

}  // namespace

std::vector<PropertyResult> run_selftest(const SimConfig& cfg)
{
    cfg.validate();
    std::vector<PropertyResult> out;
    out.push_back(factorization_suite(cfg, false));
    out.push_back(factorization_suite(cfg, true));
    out.push_back(determinant_identity(cfg));
    for (auto& r : asymptotic_ratio(cfg)) {
        out.push_back(std::move(r));
    }
    out.push_back(kronecker_parseval(cfg, false));
    out.push_back(kronecker_parseval(cfg, true));
    out.push_back(detector_oracle(cfg));
    out.push_back(feedback_ordering(cfg));
    for (auto& r : scheduling_properties(cfg)) {
        out.push_back(std::move(r));
    }
    out.push_back(codebook_nesting(cfg));
    return out;
}

std::vector<ResultRow> selftest_rows(const std::vector<PropertyResult>& results)
{
    std::vector<ResultRow> rows;
    rows.reserve(results.size());
    for (const auto& r : results) {
        rows.push_back({"selftest", r.name, 0.0, 0, "inf", 0, r.statistic, r.value, 0.0,
                        r.instances});
    }
    return rows;
}

}  // namespace gmdsim
