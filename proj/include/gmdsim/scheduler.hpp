#pragma once

#include "gmdsim/feedback.hpp"
#include "gmdsim/schemes.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace gmdsim {

enum class Granularity { PerSubcarrier, PerCluster };

/// Winner and its reported rate for each scheduling unit.
struct ScheduleDecision {
    Granularity granularity = Granularity::PerSubcarrier;
    std::vector<std::size_t> winners;
    std::vector<double> rates;
};

/// Max-rate allocation: each unit goes to the terminal reporting the highest
/// rate for it, lowest terminal index on ties.
///
/// Throws EmptyReports for an empty span and MixedSchemes when the reports
/// disagree on scheme or unit count.
ScheduleDecision schedule(std::span<const FeedbackReport> reports);

/// Mean scheduled rate per subcarrier. Cluster rates are weighted by U, which
/// for equal-size clusters is their plain mean.
double system_throughput(const ScheduleDecision& decision,
                         const std::optional<ClusterPlan>& plan = std::nullopt);

/// Fraction of scheduling units won by each of `terminals` terminals.
std::vector<double> unit_share(const ScheduleDecision& decision, std::size_t terminals);

}  // namespace gmdsim
