#pragma once

#include "gmdsim/complex_matrix.hpp"
#include "gmdsim/random.hpp"
#include "gmdsim/schemes.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace gmdsim {

/// Gray-mapped QPSK: bit pair (b0, b1) -> ((1 − 2b0) + j(1 − 2b1))/√2.
/// Symbol index k packs the pair as k = 2·b0 + b1.
cplx qpsk_symbol(unsigned index) noexcept;

std::vector<cplx> qpsk_modulate(std::span<const std::uint8_t> bits);
std::vector<std::uint8_t> qpsk_demap(std::span<const cplx> symbols);

/// Bits plus their M×S symbol matrix (stream-major: column t is the symbol
/// vector sent at time t, bits consumed column by column).
struct QpskFrame {
    std::vector<std::uint8_t> bits;
    ComplexMatrix symbols;
};

QpskFrame make_qpsk_frame(std::vector<std::uint8_t> bits, std::size_t streams);

struct DetectorConfig {
    std::size_t m_keep = 12;
};

/// Largest stream count the tree detector accepts.
inline constexpr std::size_t kMaxStreams = 8;

/// x = bfm·(√ρ·s).
std::vector<cplx> precode(const ComplexMatrix& bfm, std::span<const cplx> s, double rho);

/// y = g_q·bfm·(√ρ·s) without noise.
std::vector<cplx> transmit_noiseless(const ComplexMatrix& g_q, const ComplexMatrix& bfm,
                                     std::span<const cplx> s, double rho);

/// y = g_q·bfm·(√ρ·s) + w with w ~ CN(0, I).
std::vector<cplx> transmit(const ComplexMatrix& g_q, const ComplexMatrix& bfm,
                           std::span<const cplx> s, double rho, Rng& rng);

/// r = combinerᴴ·y.
std::vector<cplx> combine(const EffectiveLink& link, std::span<const cplx> y);

/// Breadth-first M-algorithm on r = √ρ·R·s + w, last stream first. Keeps
/// the m_keep best partial paths by accumulated squared distance; ties go
/// to the lexicographically smaller symbol sequence. Returns symbol indices.
std::vector<unsigned> qrdm_detect_indices(const ComplexMatrix& triangular,
                                          std::span<const cplx> r, double rho,
                                          const DetectorConfig& cfg);

std::vector<cplx> qrdm_detect(const ComplexMatrix& triangular, std::span<const cplx> r,
                              double rho, const DetectorConfig& cfg);

/// Quadrant decision per stream; ML when the link is diagonal.
std::vector<unsigned> per_stream_detect_indices(const ComplexMatrix& triangular,
                                                std::span<const cplx> r);

/// True when every off-diagonal entry is below rel_tol·‖t‖_F.
bool is_effectively_diagonal(const ComplexMatrix& t, double rel_tol = 1e-9);

/// Per-stream decisions for diagonal links, QRD-M otherwise.
std::vector<unsigned> detect_indices(const EffectiveLink& link, std::span<const cplx> r,
                                     const DetectorConfig& cfg);

/// Sends one random M-symbol vector through g_q·bfm, combines, detects and
/// returns the number of wrong bits (out of 2M).
std::size_t symbol_vector_bit_errors(const ComplexMatrix& g_q, const ComplexMatrix& bfm,
                                     const EffectiveLink& link, double rho,
                                     const DetectorConfig& cfg, Rng& rng);

/// Bit error fraction over `trials` symbol vectors (trials·2M bits).
double measure_ber(const ComplexMatrix& g_q, const ComplexMatrix& bfm, const EffectiveLink& link,
                   double rho, std::size_t trials, Rng& rng, const DetectorConfig& cfg = {});

/// Eb/N0 = ρ/2 for QPSK with unit noise variance.
double snr_from_ebn0_db(double ebn0_db) noexcept;

}  // namespace gmdsim
