#pragma once

#include "gmdsim/channel.hpp"
#include "gmdsim/codebook.hpp"
#include "gmdsim/complex_matrix.hpp"
#include "gmdsim/feedback.hpp"
#include "gmdsim/scheme_id.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace gmdsim {

/// Partition of Q subcarriers into G contiguous clusters of U = Q/G.
struct ClusterPlan {
    std::size_t clusters = 0;      // G
    std::size_t cluster_size = 0;  // U
    std::vector<std::vector<std::size_t>> index_sets;

    /// Throws InvalidPlan unless 1 ≤ G and G divides Q.
    static ClusterPlan make(std::size_t subcarriers, std::size_t clusters);

    std::size_t subcarriers() const noexcept { return clusters * cluster_size; }

    /// Subcarrier i_{g,⌈U/2⌉} (1-based position within the cluster).
    std::size_t center(std::size_t g) const { return index_sets.at(g)[(cluster_size + 1) / 2 - 1]; }
};

/// Terminal-side view of one subcarrier after combining: r = combinerᴴ·y
/// = triangular·√ρ·s + white noise.
struct EffectiveLink {
    ComplexMatrix combiner;    // N×M, orthonormal columns
    ComplexMatrix triangular;  // M×M upper triangular
    double snr = 1.0;          // ρ, linear
};

struct FeedbackReport {
    SchemeId scheme = SchemeId::PsGmd;
    std::vector<std::int64_t> bfm_indices;
    std::vector<double> rate_scalars;        // bits/s/Hz, per subcarrier or per cluster
    std::optional<std::uint64_t> bit_cost;   // empty for an unbounded codebook
};

/// Everything one terminal computes for one scheme: the report it sends, plus
/// the per-subcarrier BFM the base station will apply and the resulting link.
struct SchemeEvaluation {
    FeedbackReport report;
    std::vector<ComplexMatrix> applied_bfm;  // length Q
    std::vector<EffectiveLink> links;        // length Q
    std::vector<double> subcarrier_rates;    // C_q on the realized link, length Q
    std::size_t cluster_size = 1;            // U used to form rate_scalars
};

/// One terminal's channel in both forms the schemes consume.
struct UserChannel {
    ComplexMatrix stacked;  // H, NL×M
    FreqChannel freq;       // G_q

    static UserChannel from(const ChannelRealization& ch);
};

/// C = Σ_m log2(1 + ρ|r_mm|²).
double throughput_from_r(const ComplexMatrix& triangular, double rho);

/// Economy QR of g_q·applied_bfm. Throws RankDeficient for a singular product.
EffectiveLink realized_link(const ComplexMatrix& g_q, const ComplexMatrix& applied_bfm, double rho);

SchemeEvaluation evaluate_ps_eb(const FreqChannel& fc, double rho, const BfmCodebook& cb,
                                int bits_per_scalar = kDefaultBitsPerScalar);
SchemeEvaluation evaluate_pc_eb(const FreqChannel& fc, const ClusterPlan& plan, double rho,
                                const BfmCodebook& cb, int bits_per_scalar = kDefaultBitsPerScalar);
SchemeEvaluation evaluate_ps_gmd(const ComplexMatrix& h, const FreqChannel& fc, double rho,
                                 const BfmCodebook& cb, int bits_per_scalar = kDefaultBitsPerScalar);
SchemeEvaluation evaluate_pc_gmd(const ComplexMatrix& h, const FreqChannel& fc,
                                 const ClusterPlan& plan, double rho, const BfmCodebook& cb,
                                 int bits_per_scalar = kDefaultBitsPerScalar);
SchemeEvaluation evaluate_ps_qrd(const ComplexMatrix& h, const FreqChannel& fc, double rho,
                                 const BfmCodebook& cb, int bits_per_scalar = kDefaultBitsPerScalar);

/// Dispatch on `scheme`. `plan` is required for the per-cluster schemes.
SchemeEvaluation evaluate_scheme(SchemeId scheme, const UserChannel& user, const ClusterPlan* plan,
                                 double rho, const BfmCodebook& cb,
                                 int bits_per_scalar = kDefaultBitsPerScalar);

/// Recomputes rates and link SNRs for a different ρ. Decompositions and
/// BFM choices do not depend on ρ, so they are kept.
void rescore(SchemeEvaluation& eval, double rho);

FeedbackReport ps_eb_report(const FreqChannel& fc, double rho, const BfmCodebook& cb);
FeedbackReport pc_eb_report(const FreqChannel& fc, const ClusterPlan& plan, double rho,
                            const BfmCodebook& cb);
FeedbackReport ps_gmd_report(const ComplexMatrix& h, const FreqChannel& fc, double rho,
                             const BfmCodebook& cb);
FeedbackReport pc_gmd_report(const ComplexMatrix& h, const FreqChannel& fc,
                             const ClusterPlan& plan, double rho, const BfmCodebook& cb);
FeedbackReport ps_qrd_report(const ComplexMatrix& h, const FreqChannel& fc, double rho,
                             const BfmCodebook& cb);

}  // namespace gmdsim
