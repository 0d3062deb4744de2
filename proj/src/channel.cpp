#include "gmdsim/channel.hpp"

#include "gmdsim/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace gmdsim {

void ChannelConfig::validate() const
{
    if (tx_antennas == 0 || rx_antennas == 0 || taps == 0 || subcarriers == 0) {
        throw ConfigInvalid("channel: antenna, tap and subcarrier counts must be positive");
    }
    if (tx_antennas > rx_antennas) {
        throw ConfigInvalid("channel: requires M <= N (M=" + std::to_string(tx_antennas) +
                            ", N=" + std::to_string(rx_antennas) + ")");
    }
    if (taps > subcarriers) {
        throw ConfigInvalid("channel: requires L <= Q");
    }
    if (!(pdp_decay >= 0.0) || !std::isfinite(pdp_decay)) {
        throw ConfigInvalid("channel: pdp_decay must be finite and non-negative");
    }
}

std::vector<double> tap_powers(std::size_t taps, double pdp_decay)
{
    std::vector<double> p(taps);
    double total = 0.0;
    for (std::size_t l = 0; l < taps; ++l) {
        p[l] = std::exp(-pdp_decay * static_cast<double>(l));
        total += p[l];
    }
    for (auto& v : p) {
        v /= total;
    }
    return p;
}

ChannelRealization::ChannelRealization(const ChannelConfig& cfg)
    : cfg_(cfg), taps_(cfg.tx_antennas * cfg.rx_antennas * cfg.taps)
{
    cfg_.validate();
}

double ChannelRealization::energy() const noexcept
{
    double s = 0.0;
    for (const auto& z : taps_) {
        s += std::norm(z);
    }
    return s;
}

ChannelRealization draw_channel(Rng& rng, const ChannelConfig& cfg)
{
    ChannelRealization ch(cfg);
    const auto power = tap_powers(cfg.taps, cfg.pdp_decay);
    for (std::size_t m = 0; m < cfg.tx_antennas; ++m) {
        for (std::size_t n = 0; n < cfg.rx_antennas; ++n) {
            for (std::size_t l = 0; l < cfg.taps; ++l) {
                ch.tap(m, n, l) = complex_gaussian(rng, power[l]);
            }
        }
    }
    return ch;
}

std::vector<cplx> dft_column(std::size_t i, std::size_t subcarriers, std::size_t taps)
{
    if (i >= subcarriers) {
        throw IndexOutOfRange("dft_column: index " + std::to_string(i) + " >= Q=" +
                              std::to_string(subcarriers));
    }
    if (taps == 0 || taps > subcarriers) {
        throw IndexOutOfRange("dft_column: requires 1 <= L <= Q");
    }
    std::vector<cplx> e(taps);
    for (std::size_t l = 0; l < taps; ++l) {
        // reduce l*i mod Q first so the phase argument stays small
        const auto k = static_cast<double>((l * i) % subcarriers);
        const double angle = -2.0 * std::numbers::pi * k / static_cast<double>(subcarriers);
        e[l] = std::polar(1.0, angle);
    }
    return e;
}

FreqChannel freq_channel(const ChannelRealization& ch, std::size_t subcarriers)
{
    const auto& cfg = ch.config();
    FreqChannel out;
    out.g.reserve(subcarriers);
    for (std::size_t q = 0; q < subcarriers; ++q) {
        const auto e = dft_column(q, subcarriers, cfg.taps);
        ComplexMatrix g(cfg.rx_antennas, cfg.tx_antennas);
        for (std::size_t n = 0; n < cfg.rx_antennas; ++n) {
            for (std::size_t m = 0; m < cfg.tx_antennas; ++m) {
                cplx acc{};
                for (std::size_t l = 0; l < cfg.taps; ++l) {
                    acc += e[l] * ch.tap(m, n, l);
                }
                g(n, m) = acc;
            }
        }
        out.g.push_back(std::move(g));
    }
    return out;
}

ComplexMatrix stack_channel(const ChannelRealization& ch)
{
    const auto& cfg = ch.config();
    ComplexMatrix h(cfg.rx_antennas * cfg.taps, cfg.tx_antennas);
    for (std::size_t n = 0; n < cfg.rx_antennas; ++n) {
        for (std::size_t l = 0; l < cfg.taps; ++l) {
            for (std::size_t m = 0; m < cfg.tx_antennas; ++m) {
                h(n * cfg.taps + l, m) = ch.tap(m, n, l);
            }
        }
    }
    return h;
}

ComplexMatrix selection_matrix(std::size_t q, std::size_t subcarriers, std::size_t rx_antennas,
                               std::size_t taps)
{
    const auto e = dft_column(q, subcarriers, taps);
    ComplexMatrix w(rx_antennas, rx_antennas * taps);
    for (std::size_t n = 0; n < rx_antennas; ++n) {
        for (std::size_t l = 0; l < taps; ++l) {
            w(n, n * taps + l) = e[l];
        }
    }
    return w;
}

}  // namespace gmdsim
