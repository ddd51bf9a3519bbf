#pragma once

#include <string>

#include <json.hpp>

#include "cellgrid/model/network.hpp"
#include "cellgrid/model/topology.hpp"

namespace cellgrid::model {

// Network file: {"meta": {...}, "nodes": [...], "links": [...]}; keys are emitted sorted so
// equal networks serialize to identical text.
std::string network_to_json(const Network& net, int indent = 2);
// Throws InvalidNetwork on malformed documents.
Network network_from_json(const std::string& text);

std::string config_to_json(const TopoConfig& cfg, int indent = 2);
// Missing keys keep their defaults; unknown keys are rejected.
TopoConfig config_from_json(const std::string& text);

// The "latency" object of a config document; keys absent from j keep the fallback's ranges.
nlohmann::json latency_to_json(const LatencyDraws& d);
LatencyDraws latency_from_json(const nlohmann::json& j, LatencyDraws fallback = {});

}  // namespace cellgrid::model
