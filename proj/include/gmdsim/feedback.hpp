#pragma once

#include "gmdsim/scheme_id.hpp"

#include <cstddef>
#include <cstdint>

namespace gmdsim {

/// Bits used to quantize one fed-back real scalar. Real-valued feedback is
/// not quantized by the simulation; this only prices it.
inline constexpr int kDefaultBitsPerScalar = 16;

struct FeedbackBudget {
    std::uint64_t bfm_bits = 0;
    std::uint64_t scalar_count = 0;
    std::uint64_t total_bits = 0;  // bfm_bits + scalar_count * bits_per_scalar
};

/// Uplink cost of one terminal's report:
///   PS-EB           Q·B BFM bits, Q·M scalars (one per stream)
///   PC-EB           G·B,          G
///   PS-GMD, PS-QRD  B,            Q
///   PC-GMD          B,            G
/// Throws InvalidPlan unless G ≥ 1 divides Q.
FeedbackBudget feedback_cost(SchemeId scheme, std::size_t subcarriers, std::size_t clusters,
                             int bits, int bits_per_scalar, std::size_t tx_antennas);

}  // namespace gmdsim
