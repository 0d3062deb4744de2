#include "gmdsim/errors.hpp"
#include "gmdsim/sim.hpp"

#include <doctest.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace gmdsim;

namespace {

SimConfig parse(const std::string& text, CaseId id = CaseId::Case3)
{
    std::istringstream in(text);
    return parse_config(in, default_config(id));
}

std::string csv(const std::vector<ResultRow>& rows)
{
    std::ostringstream out;
    write_csv(rows, out);
    return out.str();
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        out.push_back(cell);
    }
    return out;
}

SimConfig tiny(CaseId id)
{
    auto cfg = default_config(id);
    cfg.Q = 16;
    cfg.K = 3;
    cfg.trials = 6;
    cfg.frames = 2;
    cfg.K_grid = {1, 3};
    cfg.B_grid = {0, 2, std::nullopt};
    cfg.G_grid = {2, 4, 8};
    return cfg;
}

}  // namespace

TEST_SUITE("simcli")
{
    TEST_CASE("defaults")
    {
        const auto cfg = default_config(CaseId::Case1);
        CHECK(cfg.Q == 64);
        CHECK(cfg.M == 2);
        CHECK(cfg.N == 2);
        CHECK(cfg.K == 10);
        CHECK(cfg.m_keep == 12);
        CHECK(cfg.trials == 2000);
        CHECK(cfg.frames == 100);
        CHECK_NOTHROW(cfg.validate());
        CHECK(default_config(CaseId::Case3).schemes ==
              std::vector<SchemeId>{SchemeId::PcGmd, SchemeId::PcEb});
        CHECK(to_string(CaseId::Case2) == "case2");
    }

    TEST_CASE("config parsing")
    {
        const auto cfg = parse(
            "# comment\n"
            "Q = 32   # trailing comment\n"
            "snr_grid = 0, 5.5, 10\n"
            "B = inf\n"
            "B_grid = 0, 4, inf\n"
            "G_grid = 2,4\n"
            "schemes = pc_gmd, PC-EB\n"
            "seed = 18446744073709551615\n"
            "\n");
        CHECK(cfg.Q == 32);
        CHECK(cfg.snr_grid == std::vector<double>{0.0, 5.5, 10.0});
        CHECK_FALSE(cfg.B.has_value());
        CHECK(cfg.B_grid == std::vector<CodebookBits>{0, 4, std::nullopt});
        CHECK(cfg.G_grid == std::vector<std::size_t>{2, 4});
        CHECK(cfg.seed == 18446744073709551615ull);
        CHECK(cfg.schemes.size() == 2);
        CHECK(parse_codebook_bits(" INF ") == std::nullopt);
        CHECK(parse_codebook_bits("6") == 6);
        CHECK(to_string(CodebookBits{}) == "inf");
    }

    TEST_CASE("config errors fail closed")
    {
        CHECK_THROWS_AS(parse("bogus = 1\n"), ConfigInvalid);
        CHECK_THROWS_AS(parse("Q = 64\nQ = 32\n"), ConfigInvalid);
        CHECK_THROWS_AS(parse("Q = sixty\n"), ConfigInvalid);
        CHECK_THROWS_AS(parse("Q = 64.5\n"), ConfigInvalid);
        CHECK_THROWS_AS(parse("Q\n"), ConfigInvalid);
        CHECK_THROWS_AS(parse("snr_grid = 1,,2\n"), ConfigInvalid);
        CHECK_THROWS_AS(parse("schemes = PS-XYZ\n"), ConfigInvalid);
        CHECK_THROWS_AS(parse("trials =\n"), ConfigInvalid);
        CHECK_THROWS_AS(load_config("/nonexistent/dir/cfg.txt", SimConfig{}), IoFailure);
    }

    TEST_CASE("validation")
    {
        auto bad = [](auto mutate) {
            auto cfg = default_config(CaseId::Case3);
            mutate(cfg);
            return cfg;
        };
        CHECK_THROWS_AS(bad([](SimConfig& c) { c.trials = 0; }).validate(), ConfigInvalid);
        CHECK_THROWS_AS(bad([](SimConfig& c) { c.G_grid = {3}; }).validate(), ConfigInvalid);
        CHECK_THROWS_AS(bad([](SimConfig& c) { c.M = 3; }).validate(), ConfigInvalid);
        CHECK_THROWS_AS(bad([](SimConfig& c) { c.m_keep = 17; }).validate(), ConfigInvalid);
        CHECK_THROWS_AS(bad([](SimConfig& c) { c.B = 17; }).validate(), ConfigInvalid);
        CHECK_THROWS_AS(bad([](SimConfig& c) { c.snr_grid = {}; }).validate(), ConfigInvalid);
        CHECK_THROWS_AS(bad([](SimConfig& c) { c.schemes = {}; }).validate(), ConfigInvalid);
        CHECK_THROWS_AS(bad([](SimConfig& c) { c.K_grid = {0}; }).validate(), ConfigInvalid);
        CHECK_THROWS_AS(bad([](SimConfig& c) { c.workers = 0; }).validate(), ConfigInvalid);
        CHECK_THROWS_AS(bad([](SimConfig& c) { c.L = 100; }).validate(), ConfigInvalid);

        auto c1 = default_config(CaseId::Case1);
        c1.trials = 0;
        CHECK_THROWS_AS(run_case1(c1), ConfigInvalid);
        CHECK_THROWS_AS(run_case3(default_config(CaseId::Case1)), ConfigInvalid);
        CHECK_THROWS_AS(run_case1(default_config(CaseId::Case3)), ConfigInvalid);
    }

    TEST_CASE("estimate uses the sample standard deviation")
    {
        const auto e = estimate({1.0, 2.0, 3.0, 4.0});
        CHECK(e.mean == doctest::Approx(2.5));
        CHECK(e.ci95 == doctest::Approx(1.96 * std::sqrt(5.0 / 3.0) / 2.0));
        CHECK(e.n == 4);
        CHECK(estimate({}).n == 0);
        CHECK(estimate({7.0}).ci95 == 0.0);
    }

    TEST_CASE("number formatting round-trips at 12 digits")
    {
        for (double v : {0.0, 1.0, 1e-7, 0.1, 123456.789012345, 9.87654321098765e-5, 10.0}) {
            const auto s = format_number(v);
            CHECK(s.find(',') == std::string::npos);
            const double back = std::stod(s);
            CHECK(format_number(back) == s);
            if (v != 0.0) {
                CHECK(std::abs(back - v) / std::abs(v) <= 5e-12);
            }
        }
        CHECK(format_number(10.0) == "10");
    }

    TEST_CASE("CSV layout")
    {
        CHECK(csv({}) == std::string(kCsvHeader) + "\n");
        const ResultRow row{"case1", "PS-GMD", 10.0, 10, "inf", 64, "ber", 1.25e-06, 4.5e-07, 2000};
        CHECK(csv({row}) == std::string(kCsvHeader) + "\ncase1,PS-GMD,10,10,inf,64,ber,1.25e-06,4.5e-07,2000\n");
    }

    TEST_CASE("emitted files round-trip and reruns are byte-identical")
    {
        const auto dir = std::filesystem::temp_directory_path() / "gmdsim_test_sim";
        std::filesystem::create_directories(dir);
        auto cfg = tiny(CaseId::Case3);
        const auto rows = run_case3(cfg);
        emit_csv(rows, dir / "a.csv");
        emit_csv(run_case3(cfg), dir / "b.csv");
        auto slurp = [](const std::filesystem::path& p) {
            std::ifstream in(p, std::ios::binary);
            return std::string(std::istreambuf_iterator<char>(in), {});
        };
        const auto text = slurp(dir / "a.csv");
        CHECK(text == slurp(dir / "b.csv"));

        std::istringstream in(text);
        std::string line;
        std::getline(in, line);
        CHECK(line == kCsvHeader);
        std::size_t i = 0;
        while (std::getline(in, line)) {
            const auto cells = split(line);
            REQUIRE(cells.size() == 10);
            CHECK(format_number(std::stod(cells[7])) == format_number(rows[i].value));
            CHECK(format_number(std::stod(cells[8])) == format_number(rows[i].ci95));
            CHECK(std::stoul(cells[9]) == rows[i].trials);
            ++i;
        }
        CHECK(i == rows.size());

        emit_csv({}, dir / "empty.csv");
        CHECK(slurp(dir / "empty.csv") == std::string(kCsvHeader) + "\n");
        CHECK_THROWS_AS(emit_csv(rows, dir / "missing" / "x.csv"), IoFailure);
        std::filesystem::remove_all(dir);
    }

    TEST_CASE("case outputs do not depend on the worker count")
    {
        for (CaseId id : {CaseId::Case1, CaseId::Case2, CaseId::Case3}) {
            auto cfg = tiny(id);
            cfg.workers = 1;
            const auto run = [&](const SimConfig& c) {
                switch (id) {
                case CaseId::Case1: return run_case1(c);
                case CaseId::Case2: return run_case2(c);
                default: return run_case3(c);
                }
            };
            const auto serial = csv(run(cfg));
            cfg.workers = 3;
            CHECK(csv(run(cfg)) == serial);
            cfg.seed = 2;
            CHECK(csv(run(cfg)) != serial);
        }
    }

    TEST_CASE("row order and shape")
    {
        const auto c2 = run_case2(tiny(CaseId::Case2));
        REQUIRE(c2.size() == 2 * 3);
        CHECK(c2[0].K == 1);
        CHECK(c2[0].B == "0");
        CHECK(c2[2].B == "inf");
        CHECK(c2[3].K == 3);
        for (const auto& r : c2) {
            CHECK(r.metric == "ber");
            CHECK(r.value >= 0.0);
            CHECK(r.ci95 >= 0.0);
            CHECK(r.trials == 6);
        }
        const auto c3 = run_case3(tiny(CaseId::Case3));
        REQUIRE(c3.size() == 2 * 3);
        CHECK(c3[0].scheme == "PC-GMD");
        CHECK(c3[0].G == 2);
        CHECK(c3[5].scheme == "PC-EB");
        CHECK(c3[5].G == 8);
        CHECK(c3[5].metric == "throughput");
    }

    TEST_CASE("selftest passes and is worker-independent")
    {
        auto cfg = default_config(CaseId::Selftest);
        const auto a = run_selftest(cfg);
        for (const auto& r : a) {
            CHECK_MESSAGE(r.pass, r.name << " " << r.statistic << "=" << r.value);
        }
        cfg.workers = 4;
        CHECK(csv(selftest_rows(run_selftest(cfg))) == csv(selftest_rows(a)));
    }

    TEST_CASE("parallel_for covers every index once and rethrows the lowest failure")
    {
        std::vector<std::atomic<int>> hits(1000);
        parallel_for(1000, 4, [&](std::size_t i) { hits[i]++; });
        for (const auto& h : hits) {
            CHECK(h.load() == 1);
        }
        try {
            parallel_for(100, 4, [](std::size_t i) {
                if (i % 10 == 7) {
                    throw std::runtime_error(std::to_string(i));
                }
            });
            FAIL("expected an exception");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()) == "7");
        }
        parallel_for(0, 4, [](std::size_t) { FAIL("no work expected"); });
    }
}
