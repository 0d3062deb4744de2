#pragma once

#include <array>
#include <string_view>

namespace gmdsim {

enum class SchemeId { PsEb, PcEb, PsQrd, PsGmd, PcGmd };

inline constexpr std::array<SchemeId, 5> kAllSchemes = {
    SchemeId::PsEb, SchemeId::PcEb, SchemeId::PsQrd, SchemeId::PsGmd, SchemeId::PcGmd};

/// "PS-EB", "PC-EB", "PS-QRD", "PS-GMD", "PC-GMD".
std::string_view to_string(SchemeId id) noexcept;

/// Accepts the hyphenated names above (case-insensitive, '_' or '-').
/// Throws std::invalid_argument on anything else.
SchemeId parse_scheme(std::string_view name);

/// Per-cluster schemes feed back one rate per cluster instead of per subcarrier.
constexpr bool is_per_cluster(SchemeId id) noexcept
{
    return id == SchemeId::PcEb || id == SchemeId::PcGmd;
}

}  // namespace gmdsim
