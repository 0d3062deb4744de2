// Monte-Carlo driver: simcli case1|case2|case3|selftest [options]
//
// Exit status: 0 success, 1 selftest failure or internal error,
// 2 invalid configuration or arguments, 3 file I/O failure.

#include "gmdsim/errors.hpp"
#include "gmdsim/sim.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct Options {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<std::size_t> workers;
};

gmdsim::SimConfig resolve(gmdsim::CaseId id, const Options& opt)
{
    auto cfg = gmdsim::default_config(id);
    if (!opt.config.empty()) {
        cfg = gmdsim::load_config(opt.config, cfg);
    }
    if (opt.seed) {
        cfg.seed = *opt.seed;
    }
    if (opt.trials) {
        cfg.trials = *opt.trials;
    }
    if (opt.workers) {
        cfg.workers = *opt.workers;
    }
    cfg.validate();
    return cfg;
}

void write_rows(const std::vector<gmdsim::ResultRow>& rows, const Options& opt)
{
    if (opt.out.empty() || opt.out == "-") {
        gmdsim::write_csv(rows, std::cout);
        std::cout.flush();
        if (!std::cout) {
            throw gmdsim::IoFailure("write to stdout failed");
        }
    } else {
        gmdsim::emit_csv(rows, opt.out);
    }
}

int run(gmdsim::CaseId id, const Options& opt)
{
    const auto cfg = resolve(id, opt);
    switch (id) {
    case gmdsim::CaseId::Case1: write_rows(gmdsim::run_case1(cfg), opt); return 0;
    case gmdsim::CaseId::Case2: write_rows(gmdsim::run_case2(cfg), opt); return 0;
    case gmdsim::CaseId::Case3: write_rows(gmdsim::run_case3(cfg), opt); return 0;
    case gmdsim::CaseId::Selftest: break;
    }
    const auto results = gmdsim::run_selftest(cfg);
    bool all = true;
    // Status lines go to stderr when the CSV itself goes to stdout.
    std::ostream& log = (opt.out.empty() || opt.out == "-") ? std::cerr : std::cout;
    for (const auto& r : results) {
        log << (r.pass ? "PASS " : "FAIL ") << r.name << ' ' << r.statistic << '='
            << gmdsim::format_number(r.value) << " n=" << r.instances << '\n';
        all = all && r.pass;
    }
    write_rows(gmdsim::selftest_rows(results), opt);
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"OFDMA precoding and scheduling Monte-Carlo simulator"};
    app.require_subcommand(1);
    Options opt;

    const std::pair<const char*, gmdsim::CaseId> cases[] = {
        {"case1", gmdsim::CaseId::Case1},
        {"case2", gmdsim::CaseId::Case2},
        {"case3", gmdsim::CaseId::Case3},
        {"selftest", gmdsim::CaseId::Selftest},
    };
    const char* blurbs[] = {
        "Uncoded BER vs Eb/N0 with max-rate scheduling",
        "BER vs codebook size and user count",
        "Scheduled throughput vs cluster count",
        "Run the invariant suite and report pass/fail per property",
    };
    for (std::size_t i = 0; i < std::size(cases); ++i) {
        auto* sub = app.add_subcommand(cases[i].first, blurbs[i]);
        sub->add_option("--config", opt.config, "key = value configuration file");
        sub->add_option("--out", opt.out, "CSV output path ('-' or omitted: stdout)");
        sub->add_option("--seed", opt.seed, "Master seed (overrides the file)");
        sub->add_option("--trials", opt.trials, "Channel draws per point (overrides the file)");
        sub->add_option("--workers", opt.workers, "Worker threads; results do not depend on it");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    gmdsim::CaseId id = gmdsim::CaseId::Selftest;
    for (const auto& [name, cid] : cases) {
        if (app.got_subcommand(name)) {
            id = cid;
        }
    }

    try {
        return run(id, opt);
    } catch (const gmdsim::ConfigInvalid& e) {
        std::cerr << "simcli: invalid configuration: " << e.what() << '\n';
        return 2;
    } catch (const gmdsim::IoFailure& e) {
        std::cerr << "simcli: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "simcli: " << e.what() << '\n';
        return 1;
    }
}
