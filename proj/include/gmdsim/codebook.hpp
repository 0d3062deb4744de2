#pragma once

#include "gmdsim/complex_matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gmdsim {

/// Default upper bound on codebook bits accepted by generate_codebook.
inline constexpr int kMaxCodebookBits = 16;

/// Codebook of M×M unitary beamforming matrices shared by the base station
/// and the terminals. An unbounded codebook (no `bits`) stands for
/// unquantized feedback: the terminal's own matrix is applied as-is.
class BfmCodebook {
public:
    /// Unquantized sentinel for M transmit antennas.
    static BfmCodebook infinite(std::size_t tx_antennas);

    BfmCodebook(int bits, std::size_t tx_antennas, std::uint64_t seed,
                std::vector<ComplexMatrix> entries);

    bool is_infinite() const noexcept { return !bits_.has_value(); }
    std::optional<int> bits() const noexcept { return bits_; }
    std::size_t tx_antennas() const noexcept { return tx_antennas_; }
    std::uint64_t seed() const noexcept { return seed_; }
    const std::vector<ComplexMatrix>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }

    /// "inf" or the bit count.
    std::string label() const;

private:
    BfmCodebook() = default;

    std::optional<int> bits_;
    std::size_t tx_antennas_ = 0;
    std::uint64_t seed_ = 0;
    std::vector<ComplexMatrix> entries_;
};

/// Index value carried by selections from the unbounded codebook.
inline constexpr std::int64_t kUnquantizedIndex = -1;

struct BfmSelection {
    std::int64_t index = kUnquantizedIndex;
    double metric = 0.0;     // ‖pᴴ·P̃_d − I‖_F² at the chosen entry
    ComplexMatrix applied;   // the matrix the base station will use
};

/// 2^bits seeded Haar-random unitary entries. Entry d depends only on
/// (seed, d), so a smaller book is always a prefix of a larger one.
BfmCodebook generate_codebook(int bits, std::size_t tx_antennas, std::uint64_t seed,
                              int max_bits = kMaxCodebookBits);

/// Entry d of the seeded family used by generate_codebook.
ComplexMatrix codebook_entry(std::size_t tx_antennas, std::uint64_t seed, std::uint64_t d);

/// ‖pᴴ·candidate − I‖_F².
double selection_metric(const ComplexMatrix& p, const ComplexMatrix& candidate);

/// argmin_d ‖pᴴ·P̃_d − I‖², lowest index on ties.
BfmSelection select_bfm(const ComplexMatrix& p, const BfmCodebook& cb);

}  // namespace gmdsim
