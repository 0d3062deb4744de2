#include "gmdsim/channel.hpp"
#include "gmdsim/codebook.hpp"
#include "gmdsim/errors.hpp"
#include "gmdsim/feedback.hpp"
#include "gmdsim/matdecomp.hpp"
#include "gmdsim/random.hpp"
#include "gmdsim/scheduler.hpp"
#include "gmdsim/schemes.hpp"
#include "gmdsim/sim.hpp"

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace gmdsim;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

ComplexMatrix from_numpy(const CArray& a)
{
    if (a.ndim() != 2) {
        throw py::value_error("expected a 2-D array");
    }
    const auto r = static_cast<std::size_t>(a.shape(0));
    const auto c = static_cast<std::size_t>(a.shape(1));
    ComplexMatrix m(r, c);
    auto view = a.unchecked<2>();
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) {
            m(i, j) = view(static_cast<py::ssize_t>(i), static_cast<py::ssize_t>(j));
        }
    }
    return m;
}

CArray to_numpy(const ComplexMatrix& m)
{
    CArray out({static_cast<py::ssize_t>(m.rows()), static_cast<py::ssize_t>(m.cols())});
    auto view = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            view(static_cast<py::ssize_t>(i), static_cast<py::ssize_t>(j)) = m(i, j);
        }
    }
    return out;
}

ChannelConfig channel_config(std::size_t m, std::size_t n, std::size_t taps, std::size_t q, double decay)
{
    ChannelConfig cfg;
    cfg.tx_antennas = m;
    cfg.rx_antennas = n;
    cfg.taps = taps;
    cfg.subcarriers = q;
    cfg.pdp_decay = decay;
    return cfg;
}

py::dict rows_to_dict(const std::vector<ResultRow>& rows)
{
    py::list out;
    for (const auto& r : rows) {
        py::dict d;
        d["case"] = r.case_id;
        d["scheme"] = r.scheme;
        d["snr_db"] = r.snr_db;
        d["K"] = r.K;
        d["B"] = r.B;
        d["G"] = r.G;
        d["metric"] = r.metric;
        d["value"] = r.value;
        d["ci95"] = r.ci95;
        d["trials"] = r.trials;
        out.append(d);
    }
    py::dict res;
    res["rows"] = out;
    std::ostringstream csv;
    write_csv(rows, csv);
    res["csv"] = csv.str();
    return res;
}

SimConfig make_config(CaseId id, const py::dict& overrides)
{
    auto cfg = default_config(id);
    if (!overrides.empty()) {
        std::ostringstream text;
        for (const auto& [k, v] : overrides) {
            text << py::str(k).cast<std::string>() << " = " << py::str(v).cast<std::string>() << '\n';
        }
        std::istringstream in(text.str());
        cfg = parse_config(in, cfg);
    }
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Bindings for the gmdsim core: decompositions, channels, schemes and case runners.";

    py::register_exception<ConfigInvalid>(m, "ConfigInvalid", PyExc_ValueError);
    py::register_exception<RankDeficient>(m, "RankDeficient", PyExc_ArithmeticError);
    py::register_exception<DimensionMismatch>(m, "DimensionMismatch", PyExc_ValueError);

    m.def("svd", [](const CArray& a) {
        const auto f = svd(from_numpy(a));
        return py::make_tuple(to_numpy(f.u), f.s, to_numpy(f.v));
    }, py::arg("a"), "Returns (U, s, V) with A = U[:, :m]·diag(s)·Vᴴ.");

    m.def("qr", [](const CArray& a) {
        const auto f = qr_economy(from_numpy(a));
        return py::make_tuple(to_numpy(f.q), to_numpy(f.r));
    }, py::arg("a"), "Economy QR with a real non-negative diagonal in R.");

    m.def("gmd", [](const CArray& a) {
        const auto f = gmd(from_numpy(a));
        return py::make_tuple(to_numpy(f.b), to_numpy(f.e), to_numpy(f.p));
    }, py::arg("a"), "Returns (B, E, P) with A = B·E·Pᴴ and a constant diagonal in E.");

    m.def("draw_channel", [](std::uint64_t seed, std::size_t tx, std::size_t rx, std::size_t taps,
                             std::size_t subcarriers, double decay) {
        Rng rng = make_stream(seed, {});
        const auto ch = draw_channel(rng, channel_config(tx, rx, taps, subcarriers, decay));
        py::list g;
        for (const auto& gq : freq_channel(ch, subcarriers).g) {
            g.append(to_numpy(gq));
        }
        return py::make_tuple(to_numpy(stack_channel(ch)), g);
    }, py::arg("seed"), py::arg("tx") = 2, py::arg("rx") = 2, py::arg("taps") = 4,
       py::arg("subcarriers") = 64, py::arg("pdp_decay") = 0.5,
       "Returns (H stacked NL×M, [G_q for each subcarrier]).");

    m.def("throughput_from_r", [](const CArray& r, double rho) {
        return throughput_from_r(from_numpy(r), rho);
    }, py::arg("r"), py::arg("rho"));

    m.def("schedule", [](const std::vector<std::vector<double>>& rates) {
        std::vector<FeedbackReport> reps(rates.size());
        for (std::size_t k = 0; k < rates.size(); ++k) {
            reps[k].rate_scalars = rates[k];
        }
        const auto d = schedule(reps);
        return py::make_tuple(d.winners, d.rates, system_throughput(d));
    }, py::arg("rates"), "Max-rate scheduling over per-unit rates; returns (winners, rates, throughput).");

    m.def("feedback_cost", [](const std::string& scheme, std::size_t q, std::size_t g, int b,
                              int bits_per_scalar, std::size_t m_streams) {
        const auto c = feedback_cost(parse_scheme(scheme), q, g, b, bits_per_scalar, m_streams);
        py::dict d;
        d["bfm_bits"] = c.bfm_bits;
        d["scalar_count"] = c.scalar_count;
        d["total_bits"] = c.total_bits;
        return d;
    }, py::arg("scheme"), py::arg("subcarriers") = 64, py::arg("clusters") = 1, py::arg("bits") = 4,
       py::arg("bits_per_scalar") = kDefaultBitsPerScalar, py::arg("streams") = 2);

    m.def("run_case", [](int id, const py::dict& overrides) {
        const auto cid = static_cast<CaseId>(id);
        const auto cfg = make_config(cid, overrides);
        std::vector<ResultRow> rows;
        {
            py::gil_scoped_release release;
            switch (cid) {
            case CaseId::Case1: rows = run_case1(cfg); break;
            case CaseId::Case2: rows = run_case2(cfg); break;
            case CaseId::Case3: rows = run_case3(cfg); break;
            default: rows = selftest_rows(run_selftest(cfg)); break;
            }
        }
        return rows_to_dict(rows);
    }, py::arg("case_id"), py::arg("overrides") = py::dict(),
       "Runs case 1-3 (or 0 for the selftest) with config-file style overrides.");
}
