#include "gmdsim/sim.hpp"

#include "gmdsim/codebook.hpp"
#include "gmdsim/errors.hpp"
#include "gmdsim/link.hpp"
#include "gmdsim/random.hpp"
#include "gmdsim/scheduler.hpp"
#include "gmdsim/schemes.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace gmdsim {

namespace {

constexpr std::uint64_t kDataStream = 0xDA7A;
constexpr std::uint64_t kCodebookStream = 0xC0DEB00C;
constexpr std::uint64_t kMaxRedraws = 64;

struct UserState {
    UserChannel channel;
    std::vector<SchemeEvaluation> evals;
};

/// Draws terminal k of trial t and runs `build` on it, redrawing on the rare
/// rank-deficient realization. Attempt 0 uses the plain (case, k, t) stream.
template <class Build>
UserState draw_user(const SimConfig& cfg, CaseId id, std::size_t k, std::size_t t, Build&& build)
{
    const auto chan = cfg.channel();
    const auto c = static_cast<std::uint64_t>(id);
    for (std::uint64_t attempt = 0;; ++attempt) {
        Rng rng = attempt == 0 ? make_stream(cfg.seed, {c, k, t})
                               : make_stream(cfg.seed, {c, k, t, attempt});
        UserState u{UserChannel::from(draw_channel(rng, chan)), {}};
        try {
            build(u);
            return u;
        } catch (const RankDeficient&) {
            if (attempt + 1 >= kMaxRedraws) {
                throw;
            }
        }
    }
}

BfmCodebook make_codebook(const SimConfig& cfg, const CodebookBits& bits)
{
    if (!bits) {
        return BfmCodebook::infinite(cfg.M);
    }
    return generate_codebook(*bits, cfg.M, substream_seed(cfg.seed, {kCodebookStream}));
}

void require_granularity(const SimConfig& cfg, bool per_cluster, std::string_view which)
{
    for (SchemeId s : cfg.schemes) {
        if (is_per_cluster(s) != per_cluster) {
            throw ConfigInvalid(std::string(which) + " does not support scheme " +
                                std::string(to_string(s)));
        }
    }
}

/// Rescores scheme s of the first `users` terminals at ρ and schedules them.
ScheduleDecision schedule_users(std::vector<UserState>& users, std::size_t users_used,
                                std::size_t s, double rho)
{
    std::vector<FeedbackReport> reports;
    reports.reserve(users_used);
    for (std::size_t k = 0; k < users_used; ++k) {
        rescore(users[k].evals[s], rho);
        reports.push_back(users[k].evals[s].report);
    }
    return schedule(reports);
}

/// Bit error rate of one trial: `frames` symbol vectors on every subcarrier,
/// each sent to that subcarrier's winner.
double scheduled_ber(const std::vector<UserState>& users, const ScheduleDecision& d, std::size_t s,
                     double rho, std::size_t frames, const DetectorConfig& det, Rng& data)
{
    std::size_t errors = 0;
    std::size_t bits = 0;
    for (std::size_t f = 0; f < frames; ++f) {
        for (std::size_t q = 0; q < d.winners.size(); ++q) {
            const auto& user = users[d.winners[q]];
            const auto& ev = user.evals[s];
            errors += symbol_vector_bit_errors(user.channel.freq.g[q], ev.applied_bfm[q],
                                               ev.links[q], rho, det, data);
            bits += 2 * ev.applied_bfm[q].cols();
        }
    }
    return static_cast<double>(errors) / static_cast<double>(bits);
}

ResultRow make_row(CaseId id, SchemeId scheme, double snr_db, std::size_t K,
                   const CodebookBits& B, std::size_t G, std::string metric,
                   const std::vector<double>& samples)
{
    const Estimate e = estimate(samples);
    return {std::string(to_string(id)), std::string(to_string(scheme)), snr_db, K, to_string(B), G,
            std::move(metric), e.mean, e.ci95, e.n};
}

}  // namespace

Estimate estimate(const std::vector<double>& samples)
{
    Estimate e;
    e.n = samples.size();
    if (samples.empty()) {
        return e;
    }
    double sum = 0.0;
    for (double x : samples) {
        sum += x;
    }
    e.mean = sum / static_cast<double>(e.n);
    if (e.n > 1) {
        double ss = 0.0;
        for (double x : samples) {
            ss += (x - e.mean) * (x - e.mean);
        }
        const double sd = std::sqrt(ss / static_cast<double>(e.n - 1));
        e.ci95 = 1.96 * sd / std::sqrt(static_cast<double>(e.n));
    }
    return e;
}

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& body)
{
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::size_t err_index = n;
    std::exception_ptr err;
    auto run = [&] {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(err_mutex);
                // The lowest failing index wins, as in a serial run.
                if (i < err_index) {
                    err_index = i;
                    err = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) {
        pool.emplace_back(run);
    }
    run();
    for (auto& th : pool) {
        th.join();
    }
    if (err) {
        std::rethrow_exception(err);
    }
}

std::vector<ResultRow> run_case1(const SimConfig& cfg)
{
    cfg.validate();
    require_granularity(cfg, false, "case1");
    const auto cb = make_codebook(cfg, cfg.B);
    const DetectorConfig det{cfg.m_keep};
    const std::size_t S = cfg.schemes.size();
    const std::size_t P = cfg.snr_grid.size();
    const double rho0 = snr_from_ebn0_db(cfg.snr_grid.front());

    // samples[s * P + p][t]
    std::vector<std::vector<double>> samples(S * P, std::vector<double>(cfg.trials));
    parallel_for(cfg.trials, cfg.workers, [&](std::size_t t) {
        std::vector<UserState> users;
        users.reserve(cfg.K);
        for (std::size_t k = 0; k < cfg.K; ++k) {
            users.push_back(draw_user(cfg, CaseId::Case1, k, t, [&](UserState& u) {
                for (SchemeId s : cfg.schemes) {
                    u.evals.push_back(evaluate_scheme(s, u.channel, nullptr, rho0, cb,
                                                      cfg.bits_per_scalar));
                }
            }));
        }
        for (std::size_t p = 0; p < P; ++p) {
            const double rho = snr_from_ebn0_db(cfg.snr_grid[p]);
            for (std::size_t s = 0; s < S; ++s) {
                const auto d = schedule_users(users, cfg.K, s, rho);
                // Same data and noise for every scheme at a given point.
                Rng data = make_stream(cfg.seed, {1, kDataStream, t, p});
                samples[s * P + p][t] = scheduled_ber(users, d, s, rho, cfg.frames, det, data);
            }
        }
    });

    std::vector<ResultRow> rows;
    for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t p = 0; p < P; ++p) {
            rows.push_back(make_row(CaseId::Case1, cfg.schemes[s], cfg.snr_grid[p], cfg.K, cfg.B,
                                    cfg.Q, "ber", samples[s * P + p]));
        }
    }
    return rows;
}

std::vector<ResultRow> run_case2(const SimConfig& cfg)
{
    cfg.validate();
    require_granularity(cfg, false, "case2");
    std::vector<BfmCodebook> books;
    for (const auto& b : cfg.B_grid) {
        books.push_back(make_codebook(cfg, b));
    }
    const DetectorConfig det{cfg.m_keep};
    const std::size_t S = cfg.schemes.size();
    const std::size_t NB = books.size();
    const std::size_t NK = cfg.K_grid.size();
    const std::size_t P = cfg.snr_grid.size();
    const std::size_t k_max = *std::max_element(cfg.K_grid.begin(), cfg.K_grid.end());
    const double rho0 = snr_from_ebn0_db(cfg.snr_grid.front());
    auto slot = [&](std::size_t s, std::size_t ki, std::size_t bi, std::size_t p) {
        return ((s * NK + ki) * NB + bi) * P + p;
    };

    std::vector<std::vector<double>> samples(S * NK * NB * P, std::vector<double>(cfg.trials));
    parallel_for(cfg.trials, cfg.workers, [&](std::size_t t) {
        // evals[s * NB + bi]; terminal k is the same draw for every K ≥ k+1.
        std::vector<UserState> users;
        users.reserve(k_max);
        for (std::size_t k = 0; k < k_max; ++k) {
            users.push_back(draw_user(cfg, CaseId::Case2, k, t, [&](UserState& u) {
                for (SchemeId s : cfg.schemes) {
                    for (const auto& cb : books) {
                        u.evals.push_back(evaluate_scheme(s, u.channel, nullptr, rho0, cb,
                                                          cfg.bits_per_scalar));
                    }
                }
            }));
        }
        for (std::size_t p = 0; p < P; ++p) {
            const double rho = snr_from_ebn0_db(cfg.snr_grid[p]);
            for (std::size_t s = 0; s < S; ++s) {
                for (std::size_t ki = 0; ki < NK; ++ki) {
                    for (std::size_t bi = 0; bi < NB; ++bi) {
                        const std::size_t e = s * NB + bi;
                        const auto d = schedule_users(users, cfg.K_grid[ki], e, rho);
                        Rng data = make_stream(cfg.seed, {2, kDataStream, t, p});
                        samples[slot(s, ki, bi, p)][t] =
                            scheduled_ber(users, d, e, rho, cfg.frames, det, data);
                    }
                }
            }
        }
    });

    std::vector<ResultRow> rows;
    for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t ki = 0; ki < NK; ++ki) {
            for (std::size_t bi = 0; bi < NB; ++bi) {
                for (std::size_t p = 0; p < P; ++p) {
                    rows.push_back(make_row(CaseId::Case2, cfg.schemes[s], cfg.snr_grid[p],
                                            cfg.K_grid[ki], cfg.B_grid[bi], cfg.Q, "ber",
                                            samples[slot(s, ki, bi, p)]));
                }
            }
        }
    }
    return rows;
}

std::vector<ResultRow> run_case3(const SimConfig& cfg)
{
    cfg.validate();
    require_granularity(cfg, true, "case3");
    const auto cb = make_codebook(cfg, cfg.B);
    std::vector<ClusterPlan> plans;
    for (std::size_t g : cfg.G_grid) {
        plans.push_back(ClusterPlan::make(cfg.Q, g));
    }
    const std::size_t S = cfg.schemes.size();
    const std::size_t NG = plans.size();
    const std::size_t P = cfg.snr_grid.size();
    const double rho0 = std::pow(10.0, cfg.snr_grid.front() / 10.0);
    auto slot = [&](std::size_t s, std::size_t p, std::size_t gi) { return (s * P + p) * NG + gi; };

    std::vector<std::vector<double>> samples(S * P * NG, std::vector<double>(cfg.trials));
    parallel_for(cfg.trials, cfg.workers, [&](std::size_t t) {
        // evals[s * NG + gi]
        std::vector<UserState> users;
        users.reserve(cfg.K);
        for (std::size_t k = 0; k < cfg.K; ++k) {
            users.push_back(draw_user(cfg, CaseId::Case3, k, t, [&](UserState& u) {
                for (SchemeId s : cfg.schemes) {
                    for (const auto& plan : plans) {
                        u.evals.push_back(evaluate_scheme(s, u.channel, &plan, rho0, cb,
                                                          cfg.bits_per_scalar));
                    }
                }
            }));
        }
        for (std::size_t p = 0; p < P; ++p) {
            const double rho = std::pow(10.0, cfg.snr_grid[p] / 10.0);
            for (std::size_t s = 0; s < S; ++s) {
                for (std::size_t gi = 0; gi < NG; ++gi) {
                    const auto d = schedule_users(users, cfg.K, s * NG + gi, rho);
                    samples[slot(s, p, gi)][t] = system_throughput(d, plans[gi]);
                }
            }
        }
    });

    std::vector<ResultRow> rows;
    for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t p = 0; p < P; ++p) {
            for (std::size_t gi = 0; gi < NG; ++gi) {
                rows.push_back(make_row(CaseId::Case3, cfg.schemes[s], cfg.snr_grid[p], cfg.K,
                                        cfg.B, cfg.G_grid[gi], "throughput",
                                        samples[slot(s, p, gi)]));
            }
        }
    }
    return rows;
}

}  // namespace gmdsim
