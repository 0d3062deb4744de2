#include "gmdsim/link.hpp"

#include "gmdsim/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace gmdsim {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

constexpr std::array<cplx, 4> kQpsk = {
    cplx{kInvSqrt2, kInvSqrt2},    // 00
    cplx{kInvSqrt2, -kInvSqrt2},   // 01
    cplx{-kInvSqrt2, kInvSqrt2},   // 10
    cplx{-kInvSqrt2, -kInvSqrt2},  // 11
};

unsigned quadrant(cplx z) noexcept
{
    return (z.real() < 0.0 ? 2u : 0u) | (z.imag() < 0.0 ? 1u : 0u);
}

struct Path {
    double metric = 0.0;
    std::array<std::uint8_t, kMaxStreams> sym{};
};

}  // namespace

cplx qpsk_symbol(unsigned index) noexcept
{
    return kQpsk[index & 3u];
}

std::vector<cplx> qpsk_modulate(std::span<const std::uint8_t> bits)
{
    if (bits.size() % 2 != 0) {
        throw OddBitCount("qpsk_modulate: " + std::to_string(bits.size()) + " bits");
    }
    std::vector<cplx> out(bits.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = kQpsk[(bits[2 * i] ? 2u : 0u) | (bits[2 * i + 1] ? 1u : 0u)];
    }
    return out;
}

std::vector<std::uint8_t> qpsk_demap(std::span<const cplx> symbols)
{
    std::vector<std::uint8_t> bits(2 * symbols.size());
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        const unsigned k = quadrant(symbols[i]);
        bits[2 * i] = static_cast<std::uint8_t>(k >> 1);
        bits[2 * i + 1] = static_cast<std::uint8_t>(k & 1u);
    }
    return bits;
}

QpskFrame make_qpsk_frame(std::vector<std::uint8_t> bits, std::size_t streams)
{
    if (streams == 0 || bits.size() % (2 * streams) != 0 || bits.empty()) {
        throw OddBitCount("make_qpsk_frame: bit count must be a positive multiple of 2M");
    }
    const auto flat = qpsk_modulate(bits);
    const std::size_t slots = flat.size() / streams;
    ComplexMatrix sym(streams, slots);
    for (std::size_t t = 0; t < slots; ++t) {
        for (std::size_t m = 0; m < streams; ++m) {
            sym(m, t) = flat[t * streams + m];
        }
    }
    return {std::move(bits), std::move(sym)};
}

std::vector<cplx> precode(const ComplexMatrix& bfm, std::span<const cplx> s, double rho)
{
    std::vector<cplx> x = bfm * s;
    const double a = std::sqrt(rho);
    for (auto& z : x) {
        z *= a;
    }
    return x;
}

std::vector<cplx> transmit_noiseless(const ComplexMatrix& g_q, const ComplexMatrix& bfm,
                                     std::span<const cplx> s, double rho)
{
    const auto x = precode(bfm, s, rho);
    return g_q * std::span<const cplx>(x);
}

std::vector<cplx> transmit(const ComplexMatrix& g_q, const ComplexMatrix& bfm,
                           std::span<const cplx> s, double rho, Rng& rng)
{
    auto y = transmit_noiseless(g_q, bfm, s, rho);
    for (auto& z : y) {
        z += complex_gaussian(rng);
    }
    return y;
}

std::vector<cplx> combine(const EffectiveLink& link, std::span<const cplx> y)
{
    const auto& c = link.combiner;
    if (y.size() != c.rows()) {
        throw DimensionMismatch("combine: received vector length differs from N");
    }
    std::vector<cplx> r(c.cols());
    for (std::size_t m = 0; m < c.cols(); ++m) {
        cplx acc{};
        for (std::size_t n = 0; n < c.rows(); ++n) {
            acc += std::conj(c(n, m)) * y[n];
        }
        r[m] = acc;
    }
    return r;
}

std::vector<unsigned> qrdm_detect_indices(const ComplexMatrix& triangular,
                                          std::span<const cplx> r, double rho,
                                          const DetectorConfig& cfg)
{
    const std::size_t m_streams = triangular.rows();
    if (triangular.cols() != m_streams || r.size() != m_streams) {
        throw DimensionMismatch("qrdm_detect: triangular must be MxM and r of length M");
    }
    if (m_streams > kMaxStreams) {
        throw DimensionMismatch("qrdm_detect: at most " + std::to_string(kMaxStreams) +
                                " streams supported");
    }
    const std::size_t full_tree = std::size_t{1} << (2 * m_streams);
    if (cfg.m_keep == 0 || cfg.m_keep > full_tree) {
        throw DimensionMismatch("qrdm_detect: m_keep must lie in [1, 4^M]");
    }

    thread_local std::vector<Path> survivors;
    thread_local std::vector<Path> candidates;
    survivors.assign(1, Path{});
    const double a = std::sqrt(rho);

    for (std::size_t level = m_streams; level-- > 0;) {
        candidates.clear();
        const cplx diag = triangular(level, level);
        for (const Path& sv : survivors) {
            cplx interference{};
            for (std::size_t j = level + 1; j < m_streams; ++j) {
                interference += triangular(level, j) * kQpsk[sv.sym[j]];
            }
            for (unsigned k = 0; k < 4; ++k) {
                Path p = sv;
                p.sym[level] = static_cast<std::uint8_t>(k);
                p.metric = sv.metric + std::norm(r[level] - a * (diag * kQpsk[k] + interference));
                candidates.push_back(p);
            }
        }
        const auto less = [&](const Path& x, const Path& y) {
            if (x.metric != y.metric) {
                return x.metric < y.metric;
            }
            for (std::size_t j = m_streams; j-- > level;) {
                if (x.sym[j] != y.sym[j]) {
                    return x.sym[j] < y.sym[j];
                }
            }
            return false;
        };
        const std::size_t keep = std::min(cfg.m_keep, candidates.size());
        std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                          candidates.end(), less);
        survivors.assign(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep));
    }

    std::vector<unsigned> out(m_streams);
    for (std::size_t m = 0; m < m_streams; ++m) {
        out[m] = survivors.front().sym[m];
    }
    return out;
}

std::vector<cplx> qrdm_detect(const ComplexMatrix& triangular, std::span<const cplx> r,
                              double rho, const DetectorConfig& cfg)
{
    const auto idx = qrdm_detect_indices(triangular, r, rho, cfg);
    std::vector<cplx> s(idx.size());
    for (std::size_t m = 0; m < idx.size(); ++m) {
        s[m] = kQpsk[idx[m]];
    }
    return s;
}

std::vector<unsigned> per_stream_detect_indices(const ComplexMatrix& triangular,
                                                std::span<const cplx> r)
{
    if (triangular.rows() != r.size()) {
        throw DimensionMismatch("per_stream_detect: r length differs from M");
    }
    std::vector<unsigned> out(r.size());
    for (std::size_t m = 0; m < r.size(); ++m) {
        out[m] = quadrant(r[m] * std::conj(triangular(m, m)));
    }
    return out;
}

bool is_effectively_diagonal(const ComplexMatrix& t, double rel_tol)
{
    const double bound = rel_tol * t.frobenius_norm();
    for (std::size_t i = 0; i < t.rows(); ++i) {
        for (std::size_t j = 0; j < t.cols(); ++j) {
            if (i != j && std::abs(t(i, j)) > bound) {
                return false;
            }
        }
    }
    return true;
}

std::vector<unsigned> detect_indices(const EffectiveLink& link, std::span<const cplx> r,
                                     const DetectorConfig& cfg)
{
    if (is_effectively_diagonal(link.triangular)) {
        return per_stream_detect_indices(link.triangular, r);
    }
    return qrdm_detect_indices(link.triangular, r, link.snr, cfg);
}

std::size_t symbol_vector_bit_errors(const ComplexMatrix& g_q, const ComplexMatrix& bfm,
                                     const EffectiveLink& link, double rho,
                                     const DetectorConfig& cfg, Rng& rng)
{
    const std::size_t m_streams = bfm.cols();
    if (m_streams > kMaxStreams) {
        throw DimensionMismatch("symbol_vector_bit_errors: too many streams");
    }
    std::array<unsigned, kMaxStreams> sent{};
    std::vector<cplx> s(m_streams);
    for (std::size_t m = 0; m < m_streams; ++m) {
        sent[m] = static_cast<unsigned>(rng() & 3u);
        s[m] = kQpsk[sent[m]];
    }
    const auto y = transmit(g_q, bfm, s, rho, rng);
    const auto r = combine(link, y);
    const auto got = is_effectively_diagonal(link.triangular)
                         ? per_stream_detect_indices(link.triangular, r)
                         : qrdm_detect_indices(link.triangular, r, rho, cfg);
    std::size_t errors = 0;
    for (std::size_t m = 0; m < m_streams; ++m) {
        const unsigned diff = sent[m] ^ got[m];
        errors += (diff & 1u) + ((diff >> 1) & 1u);
    }
    return errors;
}

double measure_ber(const ComplexMatrix& g_q, const ComplexMatrix& bfm, const EffectiveLink& link,
                   double rho, std::size_t trials, Rng& rng, const DetectorConfig& cfg)
{
    if (trials == 0) {
        throw std::invalid_argument("measure_ber: trials must be >= 1");
    }
    std::size_t errors = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        errors += symbol_vector_bit_errors(g_q, bfm, link, rho, cfg, rng);
    }
    return static_cast<double>(errors) / static_cast<double>(trials * 2 * bfm.cols());
}

double snr_from_ebn0_db(double ebn0_db) noexcept
{
    return 2.0 * std::pow(10.0, ebn0_db / 10.0);
}

}  // namespace gmdsim
