#include "cellgrid/sim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numeric>
#include <thread>

#include "cellgrid/model/latency.hpp"
#include "cellgrid/model/rng.hpp"
#include "cellgrid/sim/lsr.hpp"
#include "cellgrid/sim/teid.hpp"

namespace cellgrid::sim {

namespace {

// Runs body(i) for i in [0, n) on up to jobs threads; each index writes only its own slot.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& body) {
    jobs = std::max<std::size_t>(1, std::min(jobs, n));
    if (jobs == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n && !failed; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    if (!failed.exchange(true)) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

double percentile(const std::vector<double>& sorted, double p) {
    const auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(sorted.size())));
    return sorted[std::max<std::size_t>(rank, 1) - 1];
}

double mean_of(const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

bool non_decreasing(const std::vector<double>& v) { return std::is_sorted(v.begin(), v.end()); }

model::Network build(const model::TopoConfig& cfg, bool line) {
    if (line || cfg.num_switches < 2) return model::generate_line_topology(cfg);
    return model::generate_topology(cfg);
}

}  // namespace

Stats summarize(std::vector<double> values) {
    Stats s;
    s.count = values.size();
    if (values.empty()) return s;
    std::sort(values.begin(), values.end());
    s.mean = mean_of(values);
    s.min = values.front();
    s.max = values.back();
    s.p5 = percentile(values, 0.05);
    s.p50 = percentile(values, 0.50);
    s.p95 = percentile(values, 0.95);
    return s;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b, std::uint64_t r) {
    // splitmix64 finalizer over a running mix.
    auto mix = [](std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    };
    return mix(mix(mix(mix(base) ^ a) ^ b) ^ r);
}

model::TopoConfig cell_config(const LatencySweepConfig& cfg, std::size_t gnbs, std::size_t ratio, std::uint64_t seed) {
    if (ratio == 0) throw model::InfeasibleConfig("gNB-per-switch ratio must be positive");
    model::TopoConfig t;
    t.num_switches = (gnbs + ratio - 1) / ratio;
    t.gnb_per_switch = ratio;
    t.total_gnbs = gnbs;
    t.max_ue_per_gnb = cfg.max_ue_per_gnb;
    t.seed = seed;
    t.latency = cfg.latency;
    t.enforce_limits = false;
    return t;
}

std::vector<std::pair<NodeId, NodeId>> sample_cross_gnb_pairs(const model::Network& net, std::size_t n,
                                                              std::uint64_t seed) {
    const auto ues = net.of_kind(model::NodeKind::Ue);
    std::map<NodeId, NodeId> gnb;
    for (NodeId u : ues) gnb[u] = net.gnb_of(u);
    std::vector<std::pair<NodeId, NodeId>> out;
    if (ues.size() < 2) return out;
    model::Rng rng(seed);
    // Bounded rejection: a network with one gNB has no valid pair at all.
    for (std::size_t tries = 0; out.size() < n && tries < 20 * n + 100; ++tries) {
        const NodeId a = ues[rng.uniform(0, ues.size() - 1)];
        const NodeId b = ues[rng.uniform(0, ues.size() - 1)];
        if (gnb[a] != gnb[b]) out.push_back({a, b});
    }
    return out;
}

LatencyReport run_latency_experiment(const LatencySweepConfig& cfg) {
    struct CellJob {
        std::size_t gnbs, ratio;
    };
    std::vector<CellJob> jobs;
    for (auto g : cfg.gnb_counts) {
        for (auto r : cfg.ratios) jobs.push_back({g, r});
    }
    // Validate every cell up front so errors surface before any work.
    for (const auto& j : jobs) model::check_config(cell_config(cfg, j.gnbs, j.ratio, 0), 1);

    std::vector<std::vector<PairRow>> rows(jobs.size());
    parallel_for(jobs.size(), cfg.jobs, [&](std::size_t i) {
        const auto [g, r] = jobs[i];
        for (std::size_t rep = 0; rep < cfg.topologies_per_cell; ++rep) {
            const auto seed = derive_seed(cfg.seed, g, r, rep);
            const auto tcfg = cell_config(cfg, g, r, seed);
            const auto net = build(tcfg, false);
            const model::LatencyModel m(net);
            for (auto [a, b] : sample_cross_gnb_pairs(net, cfg.pairs_per_topology, seed ^ 0x5a5a5a5aull)) {
                const auto t = m.terms(a, b);
                PairRow row{seed, g, r, tcfg.num_switches, a, b, t.unoptimized(), t.optimized(), 0.0};
                row.gain = model::latency_gain(row.l_p, row.l_o);
                rows[i].push_back(row);
            }
        }
    });

    LatencyReport report;
    std::vector<double> cell_means;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        LatencyCell cell;
        cell.gnbs = jobs[i].gnbs;
        cell.ratio = jobs[i].ratio;
        cell.switches = (cell.gnbs + cell.ratio - 1) / cell.ratio;
        std::vector<double> gains, lp, lo;
        for (const auto& row : rows[i]) {
            gains.push_back(row.gain);
            lp.push_back(static_cast<double>(row.l_p));
            lo.push_back(static_cast<double>(row.l_o));
        }
        cell.gain = summarize(gains);
        cell.mean_l_p = mean_of(lp);
        cell.mean_l_o = mean_of(lo);
        if (cell.gain.count > 0) cell_means.push_back(cell.gain.mean);
        report.cells.push_back(cell);
        report.rows.insert(report.rows.end(), rows[i].begin(), rows[i].end());
    }
    report.grand_mean_gain = mean_of(cell_means);
    return report;
}

TeidSweepReport run_teid_sweep(const TeidSweepConfig& cfg) {
    struct Job {
        std::size_t switches, rep;
    };
    std::vector<Job> jobs;
    auto counts = cfg.switch_counts;
    std::sort(counts.begin(), counts.end());
    counts.erase(std::unique(counts.begin(), counts.end()), counts.end());
    for (auto s : counts) {
        for (std::size_t r = 0; r < cfg.topologies_per_count; ++r) jobs.push_back({s, r});
    }
    auto topo = [&](const Job& j) {
        model::TopoConfig t;
        t.num_switches = j.switches;
        t.gnb_per_switch = cfg.gnb_per_switch;
        t.max_ue_per_gnb = cfg.max_ue_per_gnb;
        t.seed = derive_seed(cfg.seed, j.switches, cfg.line ? 1 : 0, j.rep);
        t.latency = cfg.latency;
        t.enforce_limits = false;
        return t;
    };
    for (const auto& j : jobs) model::check_config(topo(j), 1);

    std::vector<TeidCellRow> rows(jobs.size());
    parallel_for(jobs.size(), cfg.jobs, [&](std::size_t i) {
        const auto tcfg = topo(jobs[i]);
        const auto net = build(tcfg, cfg.line);
        TeidSimConfig sim;
        sim.queries = cfg.queries_per_topology;
        sim.seed = tcfg.seed ^ 0x7e1dull;
        const auto run = run_teid_announcement(net, births_for_every_gnb(net), sim);
        const auto lsr = run_lsr(net.switch_graph());

        std::vector<double> adv, ret;
        for (const auto& a : run.report.adverts) adv.push_back(static_cast<double>(a.duration));
        for (const auto& q : run.report.queries) ret.push_back(static_cast<double>(q.duration));
        TeidCellRow& row = rows[i];
        row.switches = jobs[i].switches;
        row.topology_seed = tcfg.seed;
        row.mean_advertisement_us = mean_of(adv);
        row.max_advertisement_us = adv.empty() ? 0 : *std::max_element(adv.begin(), adv.end());
        row.mean_retrieval_us = mean_of(ret);
        row.lsr_convergence_us = lsr.convergence_time;
        row.messages = run.report.messages_sent + lsr.messages_sent;
        row.events = run.report.events + lsr.events;
    });

    TeidSweepReport report;
    report.rows = rows;
    std::vector<double> adv_means, ret_means;
    for (auto s : counts) {
        TeidCountSummary sum;
        sum.switches = s;
        std::vector<double> adv, ret, conv;
        for (const auto& row : rows) {
            if (row.switches != s) continue;
            adv.push_back(row.mean_advertisement_us);
            ret.push_back(row.mean_retrieval_us);
            conv.push_back(static_cast<double>(row.lsr_convergence_us));
        }
        sum.mean_advertisement_us = mean_of(adv);
        sum.mean_retrieval_us = mean_of(ret);
        sum.mean_lsr_convergence_us = mean_of(conv);
        adv_means.push_back(sum.mean_advertisement_us);
        ret_means.push_back(sum.mean_retrieval_us);
        report.summary.push_back(sum);
    }
    report.advertisement_monotone = non_decreasing(adv_means);
    report.retrieval_monotone = non_decreasing(ret_means);
    return report;
}

}  // namespace cellgrid::sim
