#include "gmdsim/sim.hpp"

#include "gmdsim/errors.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <ostream>

namespace gmdsim {

std::string format_number(double v)
{
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                   std::chars_format::general, 12);
    return std::string(buf.data(), res.ptr);
}

void write_csv(const std::vector<ResultRow>& rows, std::ostream& out)
{
    out << kCsvHeader << '\n';
    for (const auto& r : rows) {
        out << r.case_id << ',' << r.scheme << ',' << format_number(r.snr_db) << ',' << r.K << ','
            << r.B << ',' << r.G << ',' << r.metric << ',' << format_number(r.value) << ','
            << format_number(r.ci95) << ',' << r.trials << '\n';
    }
}

void emit_csv(const std::vector<ResultRow>& rows, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoFailure("cannot open '" + path.string() + "' for writing");
    }
    write_csv(rows, out);
    out.flush();
    if (!out) {
        throw IoFailure("write to '" + path.string() + "' failed");
    }
}

}  // namespace gmdsim
