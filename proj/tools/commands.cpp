#include "commands.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "cellgrid/controller/switch_graph.hpp"
#include "cellgrid/model/network_io.hpp"
#include "cellgrid/model/topology.hpp"
#include "cellgrid/sim/lsr.hpp"
#include "cellgrid/sim/report_io.hpp"
#include "cellgrid/wire/error.hpp"
#include "cellgrid/wire/gtp.hpp"
#include "cellgrid/wire/hex.hpp"

namespace cellgrid::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out = "out";
    std::optional<std::size_t> jobs;
};

void add_common(CLI::App* cmd, Common& c, bool with_jobs) {
    cmd->add_option("--config", c.config, "JSON config file, or a manifest from an earlier run");
    cmd->add_option("--seed", c.seed, "Override the config seed");
    cmd->add_option("--out", c.out, "Output directory")->capture_default_str();
    if (with_jobs) cmd->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out.flush()) throw IoError("write failed for " + path.string());
}

fs::path prepare_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
    return fs::path(dir);
}

// Config text for a command: empty document when no file, the embedded config for a manifest.
std::string config_text(const Common& c, const std::string& subcommand) {
    if (c.config.empty()) return "{}";
    const std::string text = read_file(c.config);
    const json doc = json::parse(text, nullptr, false);
    if (doc.is_object() && doc.contains("manifest_version")) {
        if (doc.value("subcommand", std::string{}) != subcommand) {
            throw model::InvalidNetwork("manifest was written by " + doc.value("subcommand", std::string{"?"}));
        }
        return doc.at("config").dump();
    }
    return text;
}

void finish(const fs::path& dir, ManifestInput m, std::ostream& out) {
    write_file(dir / "manifest.json", make_manifest(m).dump(2) + "\n");
    for (const auto& f : m.outputs) out << (dir / f).string() << '\n';
    out << (dir / "manifest.json").string() << '\n';
}

int gen_topology(const Common& c, bool line, std::ostream& out) {
    json doc = json::parse(config_text(c, "gen-topology"), nullptr, false);
    if (doc.is_object() && doc.contains("line")) {
        line = line || doc.at("line").get<bool>();
        doc.erase("line");
    }
    auto cfg = model::config_from_json(doc.is_discarded() ? config_text(c, "gen-topology") : doc.dump());
    if (c.seed) cfg.seed = *c.seed;
    const auto net = line ? model::generate_line_topology(cfg) : model::generate_topology(cfg);
    const auto problems = model::validate_network(net);
    if (!problems.empty()) throw model::InvalidNetwork("generated network fails its check: " + problems.front());
    spdlog::info("generated {} switches, {} nodes, {} links", net.switch_count(), net.nodes().size(),
                 net.links().size());
    const auto dir = prepare_dir(c.out);
    write_file(dir / "topology.json", model::network_to_json(net) + "\n");
    json cj = json::parse(model::config_to_json(cfg));
    cj["line"] = line;
    finish(dir, {"gen-topology", c.config.empty() ? std::nullopt : std::optional(c.config), cfg.seed, c.out, cj,
                 {"topology.json"}, std::nullopt},
           out);
    return kExitOk;
}

int latency_sweep(const Common& c, std::ostream& out) {
    auto cfg = sim::latency_sweep_config_from_json(config_text(c, "latency-sweep"));
    if (c.seed) cfg.seed = *c.seed;
    if (c.jobs) cfg.jobs = *c.jobs;
    spdlog::info("latency sweep: {} gNB counts x {} ratios, {} jobs", cfg.gnb_counts.size(), cfg.ratios.size(),
                 cfg.jobs);
    const auto report = sim::run_latency_experiment(cfg);
    spdlog::info("{} pairs, grand mean gain {:.4f}", report.rows.size(), report.grand_mean_gain);
    const auto dir = prepare_dir(c.out);
    std::ostringstream csv;
    sim::write_pair_csv(csv, report);
    write_file(dir / "pairs.csv", csv.str());
    write_file(dir / "summary.json", sim::latency_summary_json(report) + "\n");
    finish(dir, {"latency-sweep", c.config.empty() ? std::nullopt : std::optional(c.config), cfg.seed, c.out,
                 json::parse(sim::sweep_config_to_json(cfg)), {"pairs.csv", "summary.json"},
                 std::string(sim::kPairCsvSchema)},
           out);
    return kExitOk;
}

int teid_sweep(const Common& c, std::ostream& out) {
    auto cfg = sim::teid_sweep_config_from_json(config_text(c, "teid-sweep"));
    if (c.seed) cfg.seed = *c.seed;
    if (c.jobs) cfg.jobs = *c.jobs;
    spdlog::info("teid sweep: {} switch counts, {} topologies each", cfg.switch_counts.size(),
                 cfg.topologies_per_count);
    const auto report = sim::run_teid_sweep(cfg);
    const auto dir = prepare_dir(c.out);
    std::ostringstream csv;
    sim::write_teid_csv(csv, report);
    write_file(dir / "teid.csv", csv.str());
    write_file(dir / "summary.json", sim::teid_summary_json(report) + "\n");
    finish(dir, {"teid-sweep", c.config.empty() ? std::nullopt : std::optional(c.config), cfg.seed, c.out,
                 json::parse(sim::sweep_config_to_json(cfg)), {"teid.csv", "summary.json"},
                 std::string(sim::kTeidCsvSchema)},
           out);
    if (!report.advertisement_monotone || !report.retrieval_monotone) {
        spdlog::warn("durations are not monotone in switch count");
    }
    return kExitOk;
}

int lsr_check(const Common& c, const std::string& topology, bool write, std::ostream& out) {
    model::Network net;
    json cj;
    std::uint64_t seed = 0;
    if (!topology.empty()) {
        net = model::network_from_json(read_file(topology));
        cj = {{"topology", topology}};
        seed = net.meta.seed;
    } else {
        auto cfg = model::config_from_json(config_text(c, "lsr-check"));
        if (c.seed) cfg.seed = *c.seed;
        net = model::generate_topology(cfg);
        cj = json::parse(model::config_to_json(cfg));
        seed = cfg.seed;
    }
    const auto graph = net.switch_graph();
    const auto rep = sim::run_lsr(graph);
    const auto expected = controller::shortest_paths(graph);
    std::size_t routes = 0, mismatches = 0;
    for (const auto& [pair, entry] : expected.paths) {
        if (pair.first == pair.second) continue;
        ++routes;
        const auto& table = rep.tables.at(pair.first);
        auto it = table.find(pair.second);
        if (it == table.end() || it->second != entry.hops) {
            ++mismatches;
            spdlog::error("switch {} disagrees on the route to {}", pair.first, pair.second);
        }
    }
    out << "switches " << graph.nodes().size() << ", routes " << routes << ", mismatches " << mismatches
        << ", convergence_us " << rep.convergence_time << ", messages " << rep.messages_sent << '\n';
    if (write) {
        const auto dir = prepare_dir(c.out);
        const json result{{"switches", graph.nodes().size()},
                          {"routes", routes},
                          {"mismatches", mismatches},
                          {"convergence_us", rep.convergence_time},
                          {"messages_sent", rep.messages_sent},
                          {"messages_delivered", rep.messages_delivered},
                          {"duplicates", rep.duplicates},
                          {"events", rep.events}};
        write_file(dir / "lsr.json", result.dump(2) + "\n");
        finish(dir, {"lsr-check", c.config.empty() ? std::nullopt : std::optional(c.config), seed, c.out, cj,
                     {"lsr.json"}, std::nullopt},
               out);
    }
    return mismatches == 0 ? kExitOk : kExitDomain;
}

std::string describe_gtp(const wire::Bytes& bytes) {
    const auto d = wire::decode_gtp(bytes);
    const auto& h = d.header;
    std::ostringstream os;
    os << "gtp: version=" << int{h.version} << " piggyback=" << h.piggyback << " T=" << h.teid_flag
       << " type=" << int{h.message_type} << " length=" << h.message_length;
    if (h.teid) os << " teid=" << h.teid->value;
    os << " seq=" << h.sequence_number << '\n';
    if (d.payload.empty()) {
        os << "inner: absent\n";
    } else {
        os << "payload: " << d.payload.size() << " octets\n";
    }
    return os.str();
}

int decode(const std::string& hex, const std::string& layer, std::ostream& out) {
    const auto bytes = wire::from_hex(hex);
    out << (layer == "gtp" ? describe_gtp(bytes) : wire::describe_frame(bytes));
    return kExitOk;
}

}  // namespace

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

json make_manifest(const ManifestInput& in) {
    json hashed = in.config;
    if (hashed.is_object()) hashed.erase("jobs");
    char hash[32];
    std::snprintf(hash, sizeof hash, "fnv1a64:%016llx", static_cast<unsigned long long>(fnv1a(hashed.dump())));
    json m{{"manifest_version", 1},
           {"subcommand", in.subcommand},
           {"config_path", in.config_path ? json(*in.config_path) : json(nullptr)},
           {"seed", in.seed},
           {"output_dir", in.output_dir},
           {"tool_version", CELLGRID_VERSION},
           {"config_hash", hash},
           {"config", in.config},
           {"outputs", in.outputs}};
    if (in.csv_schema) m["csv_schema"] = *in.csv_schema;
    return m;
}

void configure_logging() {
    auto logger = spdlog::get("cellgrid");
    if (!logger) logger = spdlog::stderr_color_mt("cellgrid");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("CELLGRID_LOG")) {
        const auto level = spdlog::level::from_str(env);
        // from_str maps unknown names to off; only accept it when asked for.
        if (level != spdlog::level::off || std::string_view(env) == "off") {
            spdlog::set_level(level);
        } else {
            spdlog::warn("ignoring CELLGRID_LOG={}", env);
        }
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cellular SDN simulation and experiment harness", "cellgrid"};
    app.set_version_flag("--version", CELLGRID_VERSION);
    app.require_subcommand(1);

    Common common;
    bool line = false;
    std::string topology, hex, layer = "frame";
    bool write_lsr = false;

    auto* gen = app.add_subcommand("gen-topology", "Generate a random topology");
    add_common(gen, common, false);
    gen->add_flag("--line", line, "Chain the switches instead of drawing random links");

    auto* lat = app.add_subcommand("latency-sweep", "UE pair latency with and without the UPF detour");
    add_common(lat, common, true);

    auto* teid = app.add_subcommand("teid-sweep", "TEID advertisement and retrieval durations");
    add_common(teid, common, true);

    auto* lsr = app.add_subcommand("lsr-check", "Link-state routing against controller paths");
    add_common(lsr, common, false);
    lsr->add_option("--topology", topology, "Network JSON to check instead of generating one");
    lsr->add_flag("--write", write_lsr, "Write lsr.json and a manifest to the output directory");

    auto* dec = app.add_subcommand("decode", "Describe a hex frame");
    dec->add_option("hex", hex, "Frame octets in hex")->required();
    dec->add_option("--layer", layer, "frame or gtp")->check(CLI::IsMember({"frame", "gtp"}))->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*gen) return gen_topology(common, line, out);
        if (*lat) return latency_sweep(common, out);
        if (*teid) return teid_sweep(common, out);
        if (*lsr) return lsr_check(common, topology, write_lsr, out);
        if (*dec) return decode(hex, layer, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    }
    return kExitUsage;
}

}  // namespace cellgrid::cli
