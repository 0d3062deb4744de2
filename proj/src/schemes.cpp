#include "gmdsim/schemes.hpp"

#include "gmdsim/errors.hpp"
#include "gmdsim/matdecomp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gmdsim {

namespace {

constexpr double kUnitaryTolerance = 1e-8;

void require_positive_snr(double rho)
{
    if (!(rho > 0.0) || !std::isfinite(rho)) {
        throw std::invalid_argument("snr must be positive and finite");
    }
}

// Fills rate_scalars (per subcarrier when cluster_size == 1) and bit_cost.
void finish_report(SchemeEvaluation& ev, double rho, int bits_per_scalar,
                   const std::optional<int>& bits, std::size_t tx_antennas)
{
    const std::size_t q_count = ev.links.size();
    const std::size_t units = q_count / ev.cluster_size;
    ev.report.rate_scalars.assign(units, 0.0);
    rescore(ev, rho);
    if (bits) {
        ev.report.bit_cost =
            feedback_cost(ev.report.scheme, q_count, units, *bits, bits_per_scalar, tx_antennas)
                .total_bits;
    } else {
        ev.report.bit_cost.reset();
    }
}

// Shared-BFM schemes: one quantized matrix for every subcarrier.
SchemeEvaluation shared_bfm_evaluation(SchemeId scheme, const ComplexMatrix& bfm,
                                       const FreqChannel& fc, std::size_t cluster_size,
                                       double rho, const BfmCodebook& cb, int bits_per_scalar)
{
    require_positive_snr(rho);
    const BfmSelection sel = select_bfm(bfm, cb);
    SchemeEvaluation ev;
    ev.report.scheme = scheme;
    ev.report.bfm_indices = {sel.index};
    ev.cluster_size = cluster_size;
    ev.applied_bfm.assign(fc.g.size(), sel.applied);
    ev.links.reserve(fc.g.size());
    for (const auto& g : fc.g) {
        ev.links.push_back(realized_link(g, sel.applied, rho));
    }
    finish_report(ev, rho, bits_per_scalar, cb.bits(), cb.tx_antennas());
    return ev;
}

void require_consistent(const ComplexMatrix& h, const FreqChannel& fc)
{
    if (fc.g.empty()) {
        throw DimensionMismatch("frequency channel has no subcarriers");
    }
    if (h.cols() != fc.g.front().cols() || h.rows() % fc.g.front().rows() != 0) {
        throw DimensionMismatch("stacked channel does not match the frequency channel");
    }
}

void require_plan(const ClusterPlan& plan, const FreqChannel& fc)
{
    if (plan.subcarriers() != fc.g.size()) {
        throw InvalidPlan("cluster plan covers " + std::to_string(plan.subcarriers()) +
                          " subcarriers, channel has " + std::to_string(fc.g.size()));
    }
}

}  // namespace

ClusterPlan ClusterPlan::make(std::size_t subcarriers, std::size_t clusters)
{
    if (clusters == 0 || subcarriers == 0 || subcarriers % clusters != 0) {
        throw InvalidPlan("cluster count " + std::to_string(clusters) + " does not divide Q=" +
                          std::to_string(subcarriers));
    }
    ClusterPlan plan;
    plan.clusters = clusters;
    plan.cluster_size = subcarriers / clusters;
    plan.index_sets.resize(clusters);
    for (std::size_t g = 0; g < clusters; ++g) {
        for (std::size_t i = 0; i < plan.cluster_size; ++i) {
            plan.index_sets[g].push_back(g * plan.cluster_size + i);
        }
    }
    return plan;
}

UserChannel UserChannel::from(const ChannelRealization& ch)
{
    return {stack_channel(ch), freq_channel(ch, ch.config().subcarriers)};
}

double throughput_from_r(const ComplexMatrix& triangular, double rho)
{
    const std::size_t m = std::min(triangular.rows(), triangular.cols());
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sum += std::log1p(rho * std::norm(triangular(i, i)));
    }
    return sum / std::numbers::ln2;
}

EffectiveLink realized_link(const ComplexMatrix& g_q, const ComplexMatrix& applied_bfm, double rho)
{
    if (applied_bfm.rows() != applied_bfm.cols() || applied_bfm.rows() != g_q.cols()) {
        throw DimensionMismatch("realized_link: BFM must be MxM with M = channel columns");
    }
    if (orthonormality_residual(applied_bfm) > kUnitaryTolerance) {
        throw std::invalid_argument("realized_link: BFM is not unitary");
    }
    QrFactors f = qr_economy(g_q * applied_bfm);
    return {std::move(f.q), std::move(f.r), rho};
}

SchemeEvaluation evaluate_ps_eb(const FreqChannel& fc, double rho, const BfmCodebook& cb,
                                int bits_per_scalar)
{
    require_positive_snr(rho);
    SchemeEvaluation ev;
    ev.report.scheme = SchemeId::PsEb;
    ev.cluster_size = 1;
    ev.report.bfm_indices.reserve(fc.g.size());
    for (const auto& g : fc.g) {
        const SvdFactors f = svd(g);
        BfmSelection sel = select_bfm(f.v, cb);
        ev.report.bfm_indices.push_back(sel.index);
        ev.links.push_back(realized_link(g, sel.applied, rho));
        ev.applied_bfm.push_back(std::move(sel.applied));
    }
    finish_report(ev, rho, bits_per_scalar, cb.bits(), cb.tx_antennas());
    return ev;
}

SchemeEvaluation evaluate_pc_eb(const FreqChannel& fc, const ClusterPlan& plan, double rho,
                                const BfmCodebook& cb, int bits_per_scalar)
{
    require_positive_snr(rho);
    require_plan(plan, fc);
    SchemeEvaluation ev;
    ev.report.scheme = SchemeId::PcEb;
    ev.cluster_size = plan.cluster_size;
    ev.applied_bfm.resize(fc.g.size(), ComplexMatrix(1, 1));
    ev.links.resize(fc.g.size(), EffectiveLink{ComplexMatrix(1, 1), ComplexMatrix(1, 1), rho});
    for (std::size_t g = 0; g < plan.clusters; ++g) {
        const SvdFactors f = svd(fc.g[plan.center(g)]);
        const BfmSelection sel = select_bfm(f.v, cb);
        ev.report.bfm_indices.push_back(sel.index);
        for (std::size_t q : plan.index_sets[g]) {
            ev.links[q] = realized_link(fc.g[q], sel.applied, rho);
            ev.applied_bfm[q] = sel.applied;
        }
    }
    finish_report(ev, rho, bits_per_scalar, cb.bits(), cb.tx_antennas());
    return ev;
}

SchemeEvaluation evaluate_ps_gmd(const ComplexMatrix& h, const FreqChannel& fc, double rho,
                                 const BfmCodebook& cb, int bits_per_scalar)
{
    require_consistent(h, fc);
    const GmdFactors f = gmd(h);
    return shared_bfm_evaluation(SchemeId::PsGmd, f.p, fc, 1, rho, cb, bits_per_scalar);
}

SchemeEvaluation evaluate_pc_gmd(const ComplexMatrix& h, const FreqChannel& fc,
                                 const ClusterPlan& plan, double rho, const BfmCodebook& cb,
                                 int bits_per_scalar)
{
    require_consistent(h, fc);
    require_plan(plan, fc);
    const GmdFactors f = gmd(h);
    return shared_bfm_evaluation(SchemeId::PcGmd, f.p, fc, plan.cluster_size, rho, cb,
                                 bits_per_scalar);
}

SchemeEvaluation evaluate_ps_qrd(const ComplexMatrix& h, const FreqChannel& fc, double rho,
                                 const BfmCodebook& cb, int bits_per_scalar)
{
    require_consistent(h, fc);
    const SvdFactors f = svd(h);
    return shared_bfm_evaluation(SchemeId::PsQrd, f.v, fc, 1, rho, cb, bits_per_scalar);
}

SchemeEvaluation evaluate_scheme(SchemeId scheme, const UserChannel& user, const ClusterPlan* plan,
                                 double rho, const BfmCodebook& cb, int bits_per_scalar)
{
    if (is_per_cluster(scheme) && plan == nullptr) {
        throw InvalidPlan(std::string(to_string(scheme)) + " requires a cluster plan");
    }
    switch (scheme) {
    case SchemeId::PsEb: return evaluate_ps_eb(user.freq, rho, cb, bits_per_scalar);
    case SchemeId::PcEb: return evaluate_pc_eb(user.freq, *plan, rho, cb, bits_per_scalar);
    case SchemeId::PsQrd: return evaluate_ps_qrd(user.stacked, user.freq, rho, cb, bits_per_scalar);
    case SchemeId::PsGmd: return evaluate_ps_gmd(user.stacked, user.freq, rho, cb, bits_per_scalar);
    case SchemeId::PcGmd:
        return evaluate_pc_gmd(user.stacked, user.freq, *plan, rho, cb, bits_per_scalar);
    }
    throw std::invalid_argument("evaluate_scheme: unknown scheme");
}

void rescore(SchemeEvaluation& eval, double rho)
{
    require_positive_snr(rho);
    const std::size_t q_count = eval.links.size();
    eval.subcarrier_rates.resize(q_count);
    for (std::size_t q = 0; q < q_count; ++q) {
        eval.links[q].snr = rho;
        eval.subcarrier_rates[q] = throughput_from_r(eval.links[q].triangular, rho);
    }
    const std::size_t u = eval.cluster_size;
    for (std::size_t g = 0; g < eval.report.rate_scalars.size(); ++g) {
        double sum = 0.0;
        for (std::size_t i = 0; i < u; ++i) {
            sum += eval.subcarrier_rates[g * u + i];
        }
        eval.report.rate_scalars[g] = sum / static_cast<double>(u);
    }
}

FeedbackReport ps_eb_report(const FreqChannel& fc, double rho, const BfmCodebook& cb)
{
    return evaluate_ps_eb(fc, rho, cb).report;
}

FeedbackReport pc_eb_report(const FreqChannel& fc, const ClusterPlan& plan, double rho,
                            const BfmCodebook& cb)
{
    return evaluate_pc_eb(fc, plan, rho, cb).report;
}

FeedbackReport ps_gmd_report(const ComplexMatrix& h, const FreqChannel& fc, double rho,
                             const BfmCodebook& cb)
{
    return evaluate_ps_gmd(h, fc, rho, cb).report;
}

FeedbackReport pc_gmd_report(const ComplexMatrix& h, const FreqChannel& fc,
                             const ClusterPlan& plan, double rho, const BfmCodebook& cb)
{
    return evaluate_pc_gmd(h, fc, plan, rho, cb).report;
}

FeedbackReport ps_qrd_report(const ComplexMatrix& h, const FreqChannel& fc, double rho,
                             const BfmCodebook& cb)
{
    return evaluate_ps_qrd(h, fc, rho, cb).report;
}

}  // namespace gmdsim
