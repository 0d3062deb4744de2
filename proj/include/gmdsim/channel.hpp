#pragma once

#include "gmdsim/complex_matrix.hpp"
#include "gmdsim/random.hpp"

#include <cstddef>
#include <vector>

namespace gmdsim {

/// Antenna counts, delay spread and OFDM size of one MIMO link.
struct ChannelConfig {
    std::size_t tx_antennas = 2;   // M
    std::size_t rx_antennas = 2;   // N, M <= N
    std::size_t taps = 4;          // L, L <= Q
    std::size_t subcarriers = 64;  // Q
    double pdp_decay = 0.5;        // nepers per tap

    /// Throws ConfigInvalid when an invariant is violated.
    void validate() const;
};

/// Per-tap variances c·exp(−decay·l), normalized to sum to one.
std::vector<double> tap_powers(std::size_t taps, double pdp_decay);

/// Time-domain taps h^{m,n}(l) of one user during one block.
class ChannelRealization {
public:
    explicit ChannelRealization(const ChannelConfig& cfg);

    const ChannelConfig& config() const noexcept { return cfg_; }

    cplx& tap(std::size_t m, std::size_t n, std::size_t l) noexcept { return taps_[index(m, n, l)]; }
    const cplx& tap(std::size_t m, std::size_t n, std::size_t l) const noexcept
    {
        return taps_[index(m, n, l)];
    }

    double energy() const noexcept;

private:
    std::size_t index(std::size_t m, std::size_t n, std::size_t l) const noexcept
    {
        return (m * cfg_.rx_antennas + n) * cfg_.taps + l;
    }

    ChannelConfig cfg_;
    std::vector<cplx> taps_;
};

/// Per-subcarrier N×M matrices G_q, q = 0..Q−1.
struct FreqChannel {
    std::vector<ComplexMatrix> g;
};

/// i.i.d. Rayleigh taps with an exponential power-delay profile. Draw order
/// is m, then n, then l.
ChannelRealization draw_channel(Rng& rng, const ChannelConfig& cfg);

/// First L entries of DFT column i: exp(−j2π·l·i/Q), unnormalized.
std::vector<cplx> dft_column(std::size_t i, std::size_t subcarriers, std::size_t taps);

/// [G_q]_{n,m} = e_qᵀ h^{m,n}.
FreqChannel freq_channel(const ChannelRealization& ch, std::size_t subcarriers);

/// NL×M matrix H; row block n holds the L-tap columns h^{m,n}.
ComplexMatrix stack_channel(const ChannelRealization& ch);

/// W_q = I_N ⊗ e_qᵀ, so that G_q = W_q·H.
ComplexMatrix selection_matrix(std::size_t q, std::size_t subcarriers, std::size_t rx_antennas,
                               std::size_t taps);

}  // namespace gmdsim
