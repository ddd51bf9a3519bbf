#include "cellgrid/model/network_io.hpp"

#include <set>

#include <json.hpp>

namespace cellgrid::model {

using nlohmann::json;

namespace {

json range_json(const LatencyRange& r) { return {{"lo", r.lo}, {"hi", r.hi}}; }

LatencyRange range_from(const json& j, LatencyRange fallback) {
    for (const auto& [k, v] : j.items()) {
        if (k != "lo" && k != "hi") throw InvalidNetwork("unknown latency range key: " + k);
    }
    fallback.lo = j.value("lo", fallback.lo);
    fallback.hi = j.value("hi", fallback.hi);
    return fallback;
}

}  // namespace

json latency_to_json(const LatencyDraws& d) {
    return {{"link_us", range_json(d.link)},
            {"switch_processing_us", range_json(d.switch_processing)},
            {"gnb_processing_us", range_json(d.gnb_processing)},
            {"upf_processing_us", range_json(d.upf_processing)},
            {"amf_processing_us", range_json(d.amf_processing)}};
}

LatencyDraws latency_from_json(const json& j, LatencyDraws d) {
    for (const auto& [k, v] : j.items()) {
        if (k == "link_us") d.link = range_from(v, d.link);
        else if (k == "switch_processing_us") d.switch_processing = range_from(v, d.switch_processing);
        else if (k == "gnb_processing_us") d.gnb_processing = range_from(v, d.gnb_processing);
        else if (k == "upf_processing_us") d.upf_processing = range_from(v, d.upf_processing);
        else if (k == "amf_processing_us") d.amf_processing = range_from(v, d.amf_processing);
        else throw InvalidNetwork("unknown latency key: " + k);
    }
    return d;
}

std::string network_to_json(const Network& net, int indent) {
    json nodes = json::array();
    for (const auto& [id, n] : net.nodes()) {
        nodes.push_back({{"id", id}, {"kind", to_string(n.kind)}, {"processing_us", n.processing}});
    }
    json links = json::array();
    for (const auto& l : net.links()) links.push_back({{"a", l.a}, {"b", l.b}, {"latency_us", l.latency}});
    json repair = json::array();
    for (auto [a, b] : net.meta.repair_edges) repair.push_back({a, b});
    json meta{{"seed", net.meta.seed},
              {"drawn_switch_edges", net.meta.drawn_switch_edges},
              {"repair_edges", repair},
              {"generator", net.meta.generator}};
    return json{{"meta", meta}, {"nodes", nodes}, {"links", links}}.dump(indent);
}

Network network_from_json(const std::string& text) {
    Network net;
    try {
        const json j = json::parse(text);
        for (const auto& n : j.at("nodes")) {
            const auto kind = parse_node_kind(n.at("kind").get<std::string>());
            if (!kind) throw InvalidNetwork("unknown node kind: " + n.at("kind").get<std::string>());
            net.add_node({n.at("id").get<NodeId>(), *kind, n.value("processing_us", Latency{0})});
        }
        for (const auto& l : j.at("links")) {
            net.add_link(l.at("a").get<NodeId>(), l.at("b").get<NodeId>(), l.value("latency_us", Latency{0}));
        }
        if (j.contains("meta")) {
            const auto& m = j.at("meta");
            net.meta.seed = m.value("seed", std::uint64_t{0});
            net.meta.drawn_switch_edges = m.value("drawn_switch_edges", std::size_t{0});
            net.meta.generator = m.value("generator", std::string{});
            if (m.contains("repair_edges")) {
                for (const auto& e : m.at("repair_edges")) {
                    net.meta.repair_edges.push_back({e.at(0).get<SwitchId>(), e.at(1).get<SwitchId>()});
                }
            }
        }
    } catch (const json::exception& e) {
        throw InvalidNetwork(std::string("malformed network file: ") + e.what());
    }
    return net;
}

std::string config_to_json(const TopoConfig& cfg, int indent) {
    json j{{"num_switches", cfg.num_switches},
           {"gnb_per_switch", cfg.gnb_per_switch},
           {"max_ue_per_gnb", cfg.max_ue_per_gnb},
           {"total_gnbs", cfg.total_gnbs ? json(*cfg.total_gnbs) : json(nullptr)},
           {"seed", cfg.seed},
           {"max_switches", cfg.max_switches},
           {"max_gnbs", cfg.max_gnbs},
           {"max_ue_limit", cfg.max_ue_limit},
           {"enforce_limits", cfg.enforce_limits},
           {"latency", latency_to_json(cfg.latency)}};
    return j.dump(indent);
}

TopoConfig config_from_json(const std::string& text) {
    TopoConfig cfg;
    static const std::set<std::string> known{"num_switches", "gnb_per_switch", "max_ue_per_gnb", "total_gnbs",
                                             "seed",         "max_switches",   "max_gnbs",       "max_ue_limit",
                                             "enforce_limits", "latency"};
    try {
        const json j = json::parse(text);
        for (const auto& [k, v] : j.items()) {
            if (!known.count(k)) throw InvalidNetwork("unknown config key: " + k);
        }
        cfg.num_switches = j.value("num_switches", cfg.num_switches);
        cfg.gnb_per_switch = j.value("gnb_per_switch", cfg.gnb_per_switch);
        cfg.max_ue_per_gnb = j.value("max_ue_per_gnb", cfg.max_ue_per_gnb);
        if (j.contains("total_gnbs") && !j.at("total_gnbs").is_null()) cfg.total_gnbs = j.at("total_gnbs").get<std::size_t>();
        cfg.seed = j.value("seed", cfg.seed);
        cfg.max_switches = j.value("max_switches", cfg.max_switches);
        cfg.max_gnbs = j.value("max_gnbs", cfg.max_gnbs);
        cfg.max_ue_limit = j.value("max_ue_limit", cfg.max_ue_limit);
        cfg.enforce_limits = j.value("enforce_limits", cfg.enforce_limits);
        if (j.contains("latency")) cfg.latency = latency_from_json(j.at("latency"), cfg.latency);
    } catch (const json::exception& e) {
        throw InvalidNetwork(std::string("malformed config: ") + e.what());
    }
    return cfg;
}

}  // namespace cellgrid::model
