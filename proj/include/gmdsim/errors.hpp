#pragma once

#include <stdexcept>
#include <string>

namespace gmdsim {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define GMDSIM_DEFINE_ERROR(Name)                                 \
    class Name : public Error {                                   \
    public:                                                       \
        explicit Name(const std::string& what) : Error(what) {}   \
    }

// factorizations
GMDSIM_DEFINE_ERROR(NonConvergence);
GMDSIM_DEFINE_ERROR(RankDeficient);
GMDSIM_DEFINE_ERROR(DimensionMismatch);

// channel / codebook
GMDSIM_DEFINE_ERROR(IndexOutOfRange);
GMDSIM_DEFINE_ERROR(CapacityExceeded);
GMDSIM_DEFINE_ERROR(EmptyCodebook);

// link
GMDSIM_DEFINE_ERROR(OddBitCount);

// scheduler
GMDSIM_DEFINE_ERROR(MixedSchemes);
GMDSIM_DEFINE_ERROR(EmptyReports);
GMDSIM_DEFINE_ERROR(InvalidPlan);

// simulation harness
GMDSIM_DEFINE_ERROR(ConfigInvalid);
GMDSIM_DEFINE_ERROR(IoFailure);

#undef GMDSIM_DEFINE_ERROR

}  // namespace gmdsim
