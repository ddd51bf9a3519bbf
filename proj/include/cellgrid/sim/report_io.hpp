#pragma once

#include <ostream>
#include <string>

#include "cellgrid/sim/experiment.hpp"

namespace cellgrid::sim {

// Schema tags written into summaries and manifests; bump when CSV columns change.
inline constexpr const char* kPairCsvSchema = "cellgrid-pairs/1";
inline constexpr const char* kTeidCsvSchema = "cellgrid-teid/1";

// Sweep configs as single JSON documents. Missing keys keep defaults; unknown keys throw
// model::InvalidNetwork.
std::string sweep_config_to_json(const LatencySweepConfig& cfg, int indent = 2);
LatencySweepConfig latency_sweep_config_from_json(const std::string& text);
std::string sweep_config_to_json(const TeidSweepConfig& cfg, int indent = 2);
TeidSweepConfig teid_sweep_config_from_json(const std::string& text);

// topology_seed,gnbs,ratio,switches,ue_i,ue_j,l_p_us,l_o_us,gain
void write_pair_csv(std::ostream& out, const LatencyReport& report);
std::string latency_summary_json(const LatencyReport& report, int indent = 2);

// switches,topology_seed,mean_advertisement_us,max_advertisement_us,mean_retrieval_us,
// lsr_convergence_us,messages,events
void write_teid_csv(std::ostream& out, const TeidSweepReport& report);
std::string teid_summary_json(const TeidSweepReport& report, int indent = 2);

}  // namespace cellgrid::sim
