#pragma once

#include "gmdsim/channel.hpp"
#include "gmdsim/scheme_id.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace gmdsim {

/// Codebook size in bits; empty means unquantized ("inf").
using CodebookBits = std::optional<int>;

std::string to_string(const CodebookBits& bits);
CodebookBits parse_codebook_bits(const std::string& text);

enum class CaseId { Selftest = 0, Case1 = 1, Case2 = 2, Case3 = 3 };

std::string_view to_string(CaseId id) noexcept;

/// Monte-Carlo configuration. Field names double as config-file keys.
struct SimConfig {
    std::size_t Q = 64;
    std::size_t M = 2;
    std::size_t N = 2;
    std::size_t L = 4;
    std::size_t K = 10;
    std::vector<double> snr_grid{10.0};  // dB: Eb/N0 for cases 1-2, ρ for case 3
    CodebookBits B;                      // applied codebook for cases 1 and 3
    std::vector<CodebookBits> B_grid{0, 2, 4, 6, 8, std::nullopt};
    std::vector<std::size_t> K_grid{1, 5, 10};
    std::vector<std::size_t> G_grid{2, 4, 8, 16, 32};
    std::size_t trials = 2000;  // channel draws per point
    std::size_t frames = 100;   // symbol vectors per subcarrier per draw (BER cases)
    std::uint64_t seed = 1;
    double pdp_decay = 0.5;
    std::size_t m_keep = 12;
    int bits_per_scalar = 16;
    std::vector<SchemeId> schemes{SchemeId::PsGmd, SchemeId::PsQrd, SchemeId::PsEb};

    /// Not a file key; results never depend on it.
    std::size_t workers = 1;

    /// Throws ConfigInvalid.
    void validate() const;

    ChannelConfig channel() const;
};

/// Defaults for a case: the scheme list and SNR grid differ per case.
SimConfig default_config(CaseId id);

/// Applies `key = value` lines on top of `base`. '#' starts a comment.
/// Unknown or repeated keys and malformed values throw ConfigInvalid.
SimConfig parse_config(std::istream& in, SimConfig base);

/// Throws IoFailure if the file cannot be read.
SimConfig load_config(const std::filesystem::path& path, SimConfig base);

struct ResultRow {
    std::string case_id;
    std::string scheme;
    double snr_db = 0.0;
    std::size_t K = 0;
    std::string B;
    std::size_t G = 0;
    std::string metric;
    double value = 0.0;
    double ci95 = 0.0;
    std::size_t trials = 0;
};

/// Sample mean and 1.96·s/√n half-width.
struct Estimate {
    double mean = 0.0;
    double ci95 = 0.0;
    std::size_t n = 0;
};

Estimate estimate(const std::vector<double>& samples);

/// Uncoded BER vs Eb/N0 for each configured scheme with max-rate scheduling.
std::vector<ResultRow> run_case1(const SimConfig& cfg);

/// PS-GMD BER for every (K in K_grid, B in B_grid, Eb/N0 in snr_grid).
std::vector<ResultRow> run_case2(const SimConfig& cfg);

/// Scheduled throughput vs G for the per-cluster schemes at each SNR.
std::vector<ResultRow> run_case3(const SimConfig& cfg);

struct PropertyResult {
    std::string name;
    std::string statistic;
    double value = 0.0;
    std::size_t instances = 0;
    bool pass = false;
};

/// Runs the invariant suite on seeded instances.
std::vector<PropertyResult> run_selftest(const SimConfig& cfg);
std::vector<ResultRow> selftest_rows(const std::vector<PropertyResult>& results);

inline constexpr const char* kCsvHeader = "case,scheme,snr_db,K,B,G,metric,value,ci95,trials";

/// Shortest round-trip-safe text at 12 significant digits, '.' decimal point.
std::string format_number(double v);

void write_csv(const std::vector<ResultRow>& rows, std::ostream& out);

/// Throws IoFailure.
void emit_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path);

/// Runs body(i) for i in [0, n) over `workers` threads. Callers write to
/// slot i only, so the result does not depend on the worker count.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& body);

}  // namespace gmdsim
