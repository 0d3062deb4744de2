#include "gmdsim/scheme_id.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>

namespace gmdsim {

std::string_view to_string(SchemeId id) noexcept
{
    switch (id) {
    case SchemeId::PsEb: return "PS-EB";
    case SchemeId::PcEb: return "PC-EB";
    case SchemeId::PsQrd: return "PS-QRD";
    case SchemeId::PsGmd: return "PS-GMD";
    case SchemeId::PcGmd: return "PC-GMD";
    }
    return "?";
}

SchemeId parse_scheme(std::string_view name)
{
    std::string norm(name);
    std::transform(norm.begin(), norm.end(), norm.begin(), [](unsigned char c) {
        return c == '_' ? '-' : static_cast<char>(std::toupper(c));
    });
    for (SchemeId id : kAllSchemes) {
        if (norm == to_string(id)) {
            return id;
        }
    }
    throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
}

}  // namespace gmdsim
