#include "gmdsim/codebook.hpp"

#include "gmdsim/errors.hpp"
#include "gmdsim/matdecomp.hpp"
#include "gmdsim/random.hpp"

#include <stdexcept>

namespace gmdsim {

namespace {

constexpr double kUnitaryTolerance = 1e-8;

}  // namespace

BfmCodebook BfmCodebook::infinite(std::size_t tx_antennas)
{
    BfmCodebook cb;
    cb.tx_antennas_ = tx_antennas;
    return cb;
}

BfmCodebook::BfmCodebook(int bits, std::size_t tx_antennas, std::uint64_t seed,
                         std::vector<ComplexMatrix> entries)
    : bits_(bits), tx_antennas_(tx_antennas), seed_(seed), entries_(std::move(entries))
{
    for (const auto& e : entries_) {
        if (e.rows() != tx_antennas_ || e.cols() != tx_antennas_) {
            throw DimensionMismatch("BfmCodebook: entry shape differs from MxM");
        }
    }
}

std::string BfmCodebook::label() const
{
    return bits_ ? std::to_string(*bits_) : std::string("inf");
}

ComplexMatrix codebook_entry(std::size_t tx_antennas, std::uint64_t seed, std::uint64_t d)
{
    for (std::uint64_t attempt = 0;; ++attempt) {
        Rng rng = make_stream(seed, {0xC0DEB00CULL, d, attempt});
        ComplexMatrix g(tx_antennas, tx_antennas);
        for (auto& z : g.data()) {
            z = complex_gaussian(rng);
        }
        try {
            return qr_economy(g).q;
        } catch (const RankDeficient&) {
            // measure-zero event; draw again from the next attempt stream
        }
    }
}

BfmCodebook generate_codebook(int bits, std::size_t tx_antennas, std::uint64_t seed, int max_bits)
{
    if (bits < 0 || tx_antennas == 0) {
        throw std::invalid_argument("generate_codebook: requires B >= 0 and M >= 1");
    }
    if (bits > max_bits) {
        throw CapacityExceeded("generate_codebook: 2^" + std::to_string(bits) +
                               " entries exceeds the bound of 2^" + std::to_string(max_bits));
    }
    const std::uint64_t count = std::uint64_t{1} << bits;
    std::vector<ComplexMatrix> entries;
    entries.reserve(count);
    for (std::uint64_t d = 0; d < count; ++d) {
        entries.push_back(codebook_entry(tx_antennas, seed, d));
    }
    return BfmCodebook(bits, tx_antennas, seed, std::move(entries));
}

double selection_metric(const ComplexMatrix& p, const ComplexMatrix& candidate)
{
    const std::size_t m = p.rows();
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            cplx v{};
            for (std::size_t k = 0; k < m; ++k) {
                v += std::conj(p(k, i)) * candidate(k, j);
            }
            if (i == j) {
                v -= 1.0;
            }
            acc += std::norm(v);
        }
    }
    return acc;
}

BfmSelection select_bfm(const ComplexMatrix& p, const BfmCodebook& cb)
{
    if (p.rows() != p.cols() || p.rows() != cb.tx_antennas()) {
        throw DimensionMismatch("select_bfm: p must be MxM matching the codebook");
    }
    if (orthonormality_residual(p) > kUnitaryTolerance) {
        throw std::invalid_argument("select_bfm: p is not unitary");
    }
    if (cb.is_infinite()) {
        return {kUnquantizedIndex, 0.0, p};
    }
    if (cb.size() == 0) {
        throw EmptyCodebook("select_bfm: codebook has no entries");
    }
    std::size_t best = 0;
    double best_metric = selection_metric(p, cb.entries()[0]);
    for (std::size_t d = 1; d < cb.size(); ++d) {
        const double v = selection_metric(p, cb.entries()[d]);
        if (v < best_metric) {
            best_metric = v;
            best = d;
        }
    }
    return {static_cast<std::int64_t>(best), best_metric, cb.entries()[best]};
}

}  // namespace gmdsim
