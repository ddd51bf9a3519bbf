#include "cellgrid/sim/report_io.hpp"

#include <cstdio>
#include <set>

#include <json.hpp>

#include "cellgrid/model/network_io.hpp"

namespace cellgrid::sim {

using nlohmann::json;

namespace {

std::string fixed(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

json stats_json(const Stats& s) {
    return {{"count", s.count}, {"mean", s.mean}, {"min", s.min}, {"p5", s.p5},
            {"p50", s.p50},     {"p95", s.p95},   {"max", s.max}};
}

json parse_object(const std::string& text, const std::set<std::string>& known) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw model::InvalidNetwork(std::string("malformed sweep config: ") + e.what());
    }
    if (!j.is_object()) throw model::InvalidNetwork("sweep config must be a JSON object");
    for (const auto& [k, v] : j.items()) {
        if (!known.count(k)) throw model::InvalidNetwork("unknown sweep config key: " + k);
    }
    return j;
}

template <typename F>
void guarded(F&& f) {
    try {
        f();
    } catch (const json::exception& e) {
        throw model::InvalidNetwork(std::string("malformed sweep config: ") + e.what());
    }
}

}  // namespace

std::string sweep_config_to_json(const LatencySweepConfig& cfg, int indent) {
    const json j{{"gnb_counts", cfg.gnb_counts},
                 {"ratios", cfg.ratios},
                 {"topologies_per_cell", cfg.topologies_per_cell},
                 {"pairs_per_topology", cfg.pairs_per_topology},
                 {"max_ue_per_gnb", cfg.max_ue_per_gnb},
                 {"seed", cfg.seed},
                 {"latency", model::latency_to_json(cfg.latency)},
                 {"jobs", cfg.jobs}};
    return j.dump(indent);
}

LatencySweepConfig latency_sweep_config_from_json(const std::string& text) {
    const json j = parse_object(text, {"gnb_counts", "ratios", "topologies_per_cell", "pairs_per_topology",
                                       "max_ue_per_gnb", "seed", "latency", "jobs"});
    LatencySweepConfig cfg;
    guarded([&] {
        cfg.gnb_counts = j.value("gnb_counts", cfg.gnb_counts);
        cfg.ratios = j.value("ratios", cfg.ratios);
        cfg.topologies_per_cell = j.value("topologies_per_cell", cfg.topologies_per_cell);
        cfg.pairs_per_topology = j.value("pairs_per_topology", cfg.pairs_per_topology);
        cfg.max_ue_per_gnb = j.value("max_ue_per_gnb", cfg.max_ue_per_gnb);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.jobs = j.value("jobs", cfg.jobs);
        if (j.contains("latency")) cfg.latency = model::latency_from_json(j.at("latency"), cfg.latency);
    });
    return cfg;
}

std::string sweep_config_to_json(const TeidSweepConfig& cfg, int indent) {
    const json j{{"switch_counts", cfg.switch_counts},
                 {"gnb_per_switch", cfg.gnb_per_switch},
                 {"max_ue_per_gnb", cfg.max_ue_per_gnb},
                 {"topologies_per_count", cfg.topologies_per_count},
                 {"queries_per_topology", cfg.queries_per_topology},
                 {"line", cfg.line},
                 {"seed", cfg.seed},
                 {"latency", model::latency_to_json(cfg.latency)},
                 {"jobs", cfg.jobs}};
    return j.dump(indent);
}

TeidSweepConfig teid_sweep_config_from_json(const std::string& text) {
    const json j = parse_object(text, {"switch_counts", "gnb_per_switch", "max_ue_per_gnb", "topologies_per_count",
                                       "queries_per_topology", "line", "seed", "latency", "jobs"});
    TeidSweepConfig cfg;
    guarded([&] {
        cfg.switch_counts = j.value("switch_counts", cfg.switch_counts);
        cfg.gnb_per_switch = j.value("gnb_per_switch", cfg.gnb_per_switch);
        cfg.max_ue_per_gnb = j.value("max_ue_per_gnb", cfg.max_ue_per_gnb);
        cfg.topologies_per_count = j.value("topologies_per_count", cfg.topologies_per_count);
        cfg.queries_per_topology = j.value("queries_per_topology", cfg.queries_per_topology);
        cfg.line = j.value("line", cfg.line);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.jobs = j.value("jobs", cfg.jobs);
        if (j.contains("latency")) cfg.latency = model::latency_from_json(j.at("latency"), cfg.latency);
    });
    return cfg;
}

void write_pair_csv(std::ostream& out, const LatencyReport& report) {
    out << "topology_seed,gnbs,ratio,switches,ue_i,ue_j,l_p_us,l_o_us,gain\n";
    for (const auto& r : report.rows) {
        out << r.topology_seed << ',' << r.gnbs << ',' << r.ratio << ',' << r.switches << ',' << r.ue_i << ','
            << r.ue_j << ',' << r.l_p << ',' << r.l_o << ',' << fixed(r.gain) << '\n';
    }
}

std::string latency_summary_json(const LatencyReport& report, int indent) {
    json cells = json::array();
    for (const auto& c : report.cells) {
        cells.push_back({{"gnbs", c.gnbs},
                         {"ratio", c.ratio},
                         {"switches", c.switches},
                         {"gain", stats_json(c.gain)},
                         {"mean_l_p_us", c.mean_l_p},
                         {"mean_l_o_us", c.mean_l_o}});
    }
    const json j{{"schema", kPairCsvSchema},
                 {"pairs", report.rows.size()},
                 {"grand_mean_gain", report.grand_mean_gain},
                 {"cells", cells}};
    return j.dump(indent);
}

void write_teid_csv(std::ostream& out, const TeidSweepReport& report) {
    out << "switches,topology_seed,mean_advertisement_us,max_advertisement_us,mean_retrieval_us,"
           "lsr_convergence_us,messages,events\n";
    for (const auto& r : report.rows) {
        out << r.switches << ',' << r.topology_seed << ',' << fixed(r.mean_advertisement_us) << ','
            << fixed(r.max_advertisement_us) << ',' << fixed(r.mean_retrieval_us) << ',' << r.lsr_convergence_us
            << ',' << r.messages << ',' << r.events << '\n';
    }
}

std::string teid_summary_json(const TeidSweepReport& report, int indent) {
    json counts = json::array();
    for (const auto& s : report.summary) {
        counts.push_back({{"switches", s.switches},
                          {"mean_advertisement_us", s.mean_advertisement_us},
                          {"mean_retrieval_us", s.mean_retrieval_us},
                          {"mean_lsr_convergence_us", s.mean_lsr_convergence_us}});
    }
    const json j{{"schema", kTeidCsvSchema},
                 {"rows", report.rows.size()},
                 {"advertisement_monotone", report.advertisement_monotone},
                 {"retrieval_monotone", report.retrieval_monotone},
                 {"switch_counts", counts}};
    return j.dump(indent);
}

}  // namespace cellgrid::sim
