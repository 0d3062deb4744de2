#include "gmdsim/scheduler.hpp"

#include "gmdsim/errors.hpp"

#include <string>

namespace gmdsim {

FeedbackBudget feedback_cost(SchemeId scheme, std::size_t subcarriers, std::size_t clusters,
                             int bits, int bits_per_scalar, std::size_t tx_antennas)
{
    if (clusters == 0 || subcarriers == 0 || subcarriers % clusters != 0) {
        throw InvalidPlan("feedback_cost: G=" + std::to_string(clusters) + " does not divide Q=" +
                          std::to_string(subcarriers));
    }
    if (bits < 0 || bits_per_scalar < 0) {
        throw std::invalid_argument("feedback_cost: bit counts must be non-negative");
    }
    const auto b = static_cast<std::uint64_t>(bits);
    const std::uint64_t q = subcarriers;
    const std::uint64_t g = clusters;
    FeedbackBudget out;
    switch (scheme) {
    case SchemeId::PsEb:
        out.bfm_bits = q * b;
        out.scalar_count = q * tx_antennas;
        break;
    case SchemeId::PcEb:
        out.bfm_bits = g * b;
        out.scalar_count = g;
        break;
    case SchemeId::PsGmd:
    case SchemeId::PsQrd:
        out.bfm_bits = b;
        out.scalar_count = q;
        break;
    case SchemeId::PcGmd:
        out.bfm_bits = b;
        out.scalar_count = g;
        break;
    }
    out.total_bits = out.bfm_bits + out.scalar_count * static_cast<std::uint64_t>(bits_per_scalar);
    return out;
}

ScheduleDecision schedule(std::span<const FeedbackReport> reports)
{
    if (reports.empty()) {
        throw EmptyReports("schedule: no reports");
    }
    const auto& first = reports.front();
    for (const auto& r : reports) {
        if (r.scheme != first.scheme || r.rate_scalars.size() != first.rate_scalars.size()) {
            throw MixedSchemes("schedule: reports differ in scheme or unit count");
        }
    }
    ScheduleDecision d;
    d.granularity = is_per_cluster(first.scheme) ? Granularity::PerCluster
                                                 : Granularity::PerSubcarrier;
    const std::size_t units = first.rate_scalars.size();
    d.winners.assign(units, 0);
    d.rates.assign(units, 0.0);
    for (std::size_t u = 0; u < units; ++u) {
        std::size_t best = 0;
        double best_rate = reports[0].rate_scalars[u];
        for (std::size_t k = 1; k < reports.size(); ++k) {
            if (reports[k].rate_scalars[u] > best_rate) {
                best_rate = reports[k].rate_scalars[u];
                best = k;
            }
        }
        d.winners[u] = best;
        d.rates[u] = best_rate;
    }
    return d;
}

double system_throughput(const ScheduleDecision& decision, const std::optional<ClusterPlan>& plan)
{
    if (decision.rates.empty()) {
        return 0.0;
    }
    if (decision.granularity == Granularity::PerCluster && plan) {
        if (plan->clusters != decision.rates.size()) {
            throw InvalidPlan("system_throughput: plan and decision disagree on cluster count");
        }
        double sum = 0.0;
        for (double r : decision.rates) {
            sum += static_cast<double>(plan->cluster_size) * r;
        }
        return sum / static_cast<double>(plan->subcarriers());
    }
    double sum = 0.0;
    for (double r : decision.rates) {
        sum += r;
    }
    return sum / static_cast<double>(decision.rates.size());
}

std::vector<double> unit_share(const ScheduleDecision& decision, std::size_t terminals)
{
    std::vector<double> share(terminals, 0.0);
    if (decision.winners.empty()) {
        return share;
    }
    for (std::size_t w : decision.winners) {
        if (w >= terminals) {
            throw IndexOutOfRange("unit_share: winner index beyond terminal count");
        }
        share[w] += 1.0;
    }
    for (auto& s : share) {
        s /= static_cast<double>(decision.winners.size());
    }
    return share;
}

}  // namespace gmdsim
