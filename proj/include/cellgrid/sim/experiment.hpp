#pragma once

#include <cstdint>
#include <string>
#include <map>
#include <utility>
#include <vector>

#include "cellgrid/model/network.hpp"
#include "cellgrid/model/topology.hpp"

namespace cellgrid::sim {

using model::Latency;
using model::NodeId;

struct Stats {
    std::size_t count = 0;
    double mean = 0;
    double min = 0;
    double p5 = 0;
    double p50 = 0;
    double p95 = 0;
    double max = 0;
};

// Nearest-rank percentiles over a copy of the sample.
Stats summarize(std::vector<double> values);

// Seed for cell (a, b) replicate r, mixed so that neighboring cells do not share streams.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b, std::uint64_t r);

struct LatencySweepConfig {
    std::vector<std::size_t> gnb_counts{20, 40, 60, 80, 100, 120, 140, 160, 180, 200};
    std::vector<std::size_t> ratios{2, 3, 4, 5};  // gNBs per switch
    std::size_t topologies_per_cell = 5;
    std::size_t pairs_per_topology = 200;
    std::size_t max_ue_per_gnb = 10;
    std::uint64_t seed = 1;
    model::LatencyDraws latency;
    std::size_t jobs = 1;
};

struct PairRow {
    std::uint64_t topology_seed = 0;
    std::size_t gnbs = 0;
    std::size_t ratio = 0;
    std::size_t switches = 0;
    NodeId ue_i = 0;
    NodeId ue_j = 0;
    Latency l_p = 0;
    Latency l_o = 0;
    double gain = 0;
};

struct LatencyCell {
    std::size_t gnbs = 0;
    std::size_t ratio = 0;
    std::size_t switches = 0;
    Stats gain;
    double mean_l_p = 0;
    double mean_l_o = 0;
};

struct LatencyReport {
    std::vector<PairRow> rows;     // cell order, then topology, then sample order
    std::vector<LatencyCell> cells;
    double grand_mean_gain = 0;    // mean of cell means
};

// Switch count for a cell: ceil(gnbs / ratio). A single switch uses the line builder.
model::TopoConfig cell_config(const LatencySweepConfig& cfg, std::size_t gnbs, std::size_t ratio,
                              std::uint64_t seed);

// Up to n ordered UE pairs on distinct gNBs, drawn uniformly.
std::vector<std::pair<NodeId, NodeId>> sample_cross_gnb_pairs(const model::Network& net, std::size_t n,
                                                              std::uint64_t seed);

LatencyReport run_latency_experiment(const LatencySweepConfig& cfg);

struct TeidSweepConfig {
    std::vector<std::size_t> switch_counts{1, 2, 5, 10, 20};
    std::size_t gnb_per_switch = 5;
    std::size_t max_ue_per_gnb = 5;
    std::size_t topologies_per_count = 10;
    std::size_t queries_per_topology = 50;
    bool line = false;  // line topologies instead of random meshes
    std::uint64_t seed = 1;
    model::LatencyDraws latency;
    std::size_t jobs = 1;
};

struct TeidCellRow {
    std::size_t switches = 0;
    std::uint64_t topology_seed = 0;
    double mean_advertisement_us = 0;
    double max_advertisement_us = 0;
    double mean_retrieval_us = 0;
    Latency lsr_convergence_us = 0;
    std::size_t messages = 0;
    std::size_t events = 0;
};

struct TeidCountSummary {
    std::size_t switches = 0;
    double mean_advertisement_us = 0;
    double mean_retrieval_us = 0;
    double mean_lsr_convergence_us = 0;
};

struct TeidSweepReport {
    std::vector<TeidCellRow> rows;
    std::vector<TeidCountSummary> summary;  // ascending switch count
    bool advertisement_monotone = false;
    bool retrieval_monotone = false;
};

TeidSweepReport run_teid_sweep(const TeidSweepConfig& cfg);

}  // namespace cellgrid::sim
