#include "gmdsim/sim.hpp"

#include "gmdsim/codebook.hpp"
#include "gmdsim/errors.hpp"
#include "gmdsim/link.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace gmdsim {

namespace {

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_list(const std::string& value)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) {
            throw ConfigInvalid("empty list element in '" + value + "'");
        }
        out.push_back(item);
    }
    if (out.empty()) {
        throw ConfigInvalid("empty list");
    }
    return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& text)
{
    T v{};
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigInvalid("key '" + key + "': cannot parse '" + text + "'");
    }
    return v;
}

std::size_t parse_count(const std::string& key, const std::string& text)
{
    return parse_number<std::size_t>(key, text);
}

}  // namespace

std::string to_string(const CodebookBits& bits)
{
    return bits ? std::to_string(*bits) : std::string("inf");
}

CodebookBits parse_codebook_bits(const std::string& text)
{
    std::string t = trim(text);
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "inf" || t == "infinite" || t == "infinity") {
        return std::nullopt;
    }
    return parse_number<int>("B", t);
}

std::string_view to_string(CaseId id) noexcept
{
    switch (id) {
    case CaseId::Selftest: return "selftest";
    case CaseId::Case1: return "case1";
    case CaseId::Case2: return "case2";
    case CaseId::Case3: return "case3";
    }
    return "?";
}

void SimConfig::validate() const
{
    if (Q == 0 || M == 0 || N == 0 || L == 0 || K == 0) {
        throw ConfigInvalid("Q, M, N, L and K must be positive");
    }
    try {
        channel().validate();
    } catch (const ConfigInvalid&) {
        throw;
    }
    if (M > kMaxStreams) {
        throw ConfigInvalid("M may not exceed " + std::to_string(kMaxStreams));
    }
    if (snr_grid.empty()) {
        throw ConfigInvalid("snr_grid is empty");
    }
    for (double s : snr_grid) {
        if (!std::isfinite(s)) {
            throw ConfigInvalid("snr_grid entries must be finite");
        }
    }
    auto check_bits = [](const CodebookBits& b) {
        if (b && (*b < 0 || *b > kMaxCodebookBits)) {
            throw ConfigInvalid("codebook bits must lie in [0, " +
                                std::to_string(kMaxCodebookBits) + "] or be inf");
        }
    };
    check_bits(B);
    if (B_grid.empty()) {
        throw ConfigInvalid("B_grid is empty");
    }
    std::for_each(B_grid.begin(), B_grid.end(), check_bits);
    if (K_grid.empty() || std::find(K_grid.begin(), K_grid.end(), 0u) != K_grid.end()) {
        throw ConfigInvalid("K_grid must be non-empty with positive entries");
    }
    if (G_grid.empty()) {
        throw ConfigInvalid("G_grid is empty");
    }
    for (std::size_t g : G_grid) {
        if (g == 0 || Q % g != 0) {
            throw ConfigInvalid("G_grid entry " + std::to_string(g) + " does not divide Q=" +
                                std::to_string(Q));
        }
    }
    if (trials == 0) {
        throw ConfigInvalid("trials must be >= 1");
    }
    if (frames == 0) {
        throw ConfigInvalid("frames must be >= 1");
    }
    const std::size_t full_tree = std::size_t{1} << (2 * M);
    if (m_keep == 0 || m_keep > full_tree) {
        throw ConfigInvalid("m_keep must lie in [1, 4^M]");
    }
    if (bits_per_scalar < 0) {
        throw ConfigInvalid("bits_per_scalar must be non-negative");
    }
    if (schemes.empty()) {
        throw ConfigInvalid("schemes is empty");
    }
    if (workers == 0) {
        throw ConfigInvalid("workers must be >= 1");
    }
}

ChannelConfig SimConfig::channel() const
{
    return {M, N, L, Q, pdp_decay};
}

SimConfig default_config(CaseId id)
{
    SimConfig cfg;
    switch (id) {
    case CaseId::Case1:
        cfg.snr_grid = {0.0, 2.0, 4.0, 6.0, 8.0, 10.0};
        cfg.schemes = {SchemeId::PsGmd, SchemeId::PsQrd, SchemeId::PsEb};
        break;
    case CaseId::Case2:
        cfg.snr_grid = {10.0};
        cfg.schemes = {SchemeId::PsGmd};
        break;
    case CaseId::Case3:
        cfg.snr_grid = {10.0};
        cfg.schemes = {SchemeId::PcGmd, SchemeId::PcEb};
        break;
    case CaseId::Selftest:
        break;
    }
    return cfg;
}

SimConfig parse_config(std::istream& in, SimConfig cfg)
{
    using Setter = void (*)(SimConfig&, const std::string&, const std::string&);
    static const std::map<std::string, Setter> setters = {
        {"Q", [](SimConfig& c, const std::string& k, const std::string& v) { c.Q = parse_count(k, v); }},
        {"M", [](SimConfig& c, const std::string& k, const std::string& v) { c.M = parse_count(k, v); }},
        {"N", [](SimConfig& c, const std::string& k, const std::string& v) { c.N = parse_count(k, v); }},
        {"L", [](SimConfig& c, const std::string& k, const std::string& v) { c.L = parse_count(k, v); }},
        {"K", [](SimConfig& c, const std::string& k, const std::string& v) { c.K = parse_count(k, v); }},
        {"snr_grid",
         [](SimConfig& c, const std::string& k, const std::string& v) {
             c.snr_grid.clear();
             for (const auto& item : split_list(v)) {
                 c.snr_grid.push_back(parse_number<double>(k, item));
             }
         }},
        {"B", [](SimConfig& c, const std::string&, const std::string& v) { c.B = parse_codebook_bits(v); }},
        {"B_grid",
         [](SimConfig& c, const std::string&, const std::string& v) {
             c.B_grid.clear();
             for (const auto& item : split_list(v)) {
                 c.B_grid.push_back(parse_codebook_bits(item));
             }
         }},
        {"K_grid",
         [](SimConfig& c, const std::string& k, const std::string& v) {
             c.K_grid.clear();
             for (const auto& item : split_list(v)) {
                 c.K_grid.push_back(parse_count(k, item));
             }
         }},
        {"G_grid",
         [](SimConfig& c, const std::string& k, const std::string& v) {
             c.G_grid.clear();
             for (const auto& item : split_list(v)) {
                 c.G_grid.push_back(parse_count(k, item));
             }
         }},
        {"trials", [](SimConfig& c, const std::string& k, const std::string& v) { c.trials = parse_count(k, v); }},
        {"frames", [](SimConfig& c, const std::string& k, const std::string& v) { c.frames = parse_count(k, v); }},
        {"seed",
         [](SimConfig& c, const std::string& k, const std::string& v) {
             c.seed = parse_number<std::uint64_t>(k, v);
         }},
        {"pdp_decay",
         [](SimConfig& c, const std::string& k, const std::string& v) {
             c.pdp_decay = parse_number<double>(k, v);
         }},
        {"m_keep", [](SimConfig& c, const std::string& k, const std::string& v) { c.m_keep = parse_count(k, v); }},
        {"bits_per_scalar",
         [](SimConfig& c, const std::string& k, const std::string& v) {
             c.bits_per_scalar = parse_number<int>(k, v);
         }},
        {"schemes",
         [](SimConfig& c, const std::string&, const std::string& v) {
             c.schemes.clear();
             for (const auto& item : split_list(v)) {
                 try {
                     c.schemes.push_back(parse_scheme(item));
                 } catch (const std::invalid_argument& e) {
                     throw ConfigInvalid(e.what());
                 }
             }
         }},
    };

    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const std::string content = trim(line);
        if (content.empty()) {
            continue;
        }
        const auto eq = content.find('=');
        if (eq == std::string::npos) {
            throw ConfigInvalid("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = trim(std::string_view(content).substr(0, eq));
        const std::string value = trim(std::string_view(content).substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end()) {
            throw ConfigInvalid("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
        if (!seen.insert(key).second) {
            throw ConfigInvalid("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
        if (value.empty()) {
            throw ConfigInvalid("line " + std::to_string(line_no) + ": empty value for '" + key + "'");
        }
        it->second(cfg, key, value);
    }
    return cfg;
}

SimConfig load_config(const std::filesystem::path& path, SimConfig base)
{
    std::ifstream in(path);
    if (!in) {
        throw IoFailure("cannot open config file '" + path.string() + "'");
    }
    return parse_config(in, std::move(base));
}

}  // namespace gmdsim
