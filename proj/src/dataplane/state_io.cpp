#include "cellgrid/dataplane/state_io.hpp"

#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace cellgrid::dataplane {

using nlohmann::json;
using wire::MonitorRule;
using wire::Prefix;

namespace {

std::string ip(Ipv4Address a) { return a.to_string(); }

Ipv4Address parse_ip(const json& j) {
    auto a = Ipv4Address::parse(j.get<std::string>());
    if (!a) throw std::invalid_argument("bad IPv4 address: " + j.get<std::string>());
    return *a;
}

json lpm_json(const LpmTable& t) {
    json arr = json::array();
    for (const auto& e : t.entries()) {
        arr.push_back({{"prefix", ip(e.prefix)}, {"length", e.length}, {"action", e.action}});
    }
    return arr;
}

LpmTable lpm_from(const json& j) {
    LpmTable t;
    for (const auto& e : j) {
        t.insert(parse_ip(e.at("prefix")), e.at("length").get<std::uint8_t>(),
                 e.value("action", std::uint32_t{0}));
    }
    return t;
}

json tables_json(const SecurityTables& t) {
    return {{"ipv4_wlist", lpm_json(t.ipv4_wlist)}, {"ipv4_blist", lpm_json(t.ipv4_blist)},
            {"tcp_wlist", t.tcp_wlist},            {"tcp_blist", t.tcp_blist},
            {"udp_wlist", t.udp_wlist},            {"udp_blist", t.udp_blist}};
}

SecurityTables tables_from(const json& j) {
    SecurityTables t;
    t.ipv4_wlist = lpm_from(j.at("ipv4_wlist"));
    t.ipv4_blist = lpm_from(j.at("ipv4_blist"));
    j.at("tcp_wlist").get_to(t.tcp_wlist);
    j.at("tcp_blist").get_to(t.tcp_blist);
    j.at("udp_wlist").get_to(t.udp_wlist);
    j.at("udp_blist").get_to(t.udp_blist);
    return t;
}

json prefix_json(const std::optional<Prefix>& p) {
    if (!p) return nullptr;
    return {{"address", ip(p->address)}, {"length", p->length}};
}

std::optional<Prefix> prefix_from(const json& j) {
    if (j.is_null()) return std::nullopt;
    return Prefix{parse_ip(j.at("address")), j.at("length").get<std::uint8_t>()};
}

template <class T>
json opt_json(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> opt_from(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<T>();
}

json rule_json(const MonitorRule& r) {
    return {{"src", prefix_json(r.src)},
            {"dst", prefix_json(r.dst)},
            {"protocol", opt_json(r.protocol)},
            {"port", opt_json(r.port)}};
}

MonitorRule rule_from(const json& j) {
    MonitorRule r;
    r.src = prefix_from(j.at("src"));
    r.dst = prefix_from(j.at("dst"));
    r.protocol = opt_from<std::uint8_t>(j.at("protocol"));
    r.port = opt_from<std::uint16_t>(j.at("port"));
    return r;
}

}  // namespace

std::string dump_state(const SwitchState& s, int indent) {
    json j;
    j["switch_id"] = s.switch_id;
    j["security_mode"] = s.security_mode == SecurityMode::Blacklist ? "blacklist" : "whitelist";
    j["ports"] = s.ports;
    j["gnb_ports"] = s.gnb_ports;
    j["core_port"] = opt_json(s.core_port);

    json neighbors = json::array();
    for (const auto& [id, port] : s.neighbor_ports) neighbors.push_back({{"switch", id}, {"port", port}});
    j["neighbor_ports"] = neighbors;

    json macs = json::array();
    for (const auto& [mac, port] : s.mac_table) macs.push_back({{"mac", mac.to_string()}, {"port", port}});
    j["mac_table"] = macs;

    json teids = json::array();
    for (const auto& [teid, locus] : s.teids) {
        json e{{"teid", teid.value}};
        if (const auto* g = std::get_if<GnbPort>(&locus)) e["gnb_port"] = g->port;
        else e["switch"] = std::get<SwitchId>(locus);
        teids.push_back(e);
    }
    j["teids"] = teids;

    json nexthop = json::array();
    for (const auto& [dst, hop] : s.nexthop) nexthop.push_back({{"destination", dst}, {"nexthop", hop}});
    j["nexthop"] = nexthop;

    json ues = json::array();
    for (const auto& ue : s.ue_ids) ues.push_back(ue.value);
    j["ue_ids"] = ues;

    json down = json::array();
    for (const auto& [addr, teid] : s.ipv4_down_teid) down.push_back({{"ipv4", ip(addr)}, {"teid", teid.value}});
    j["ipv4_down_teid"] = down;

    j["ipv4_in_network"] = lpm_json(s.ipv4_in_network);
    j["in"] = tables_json(s.in);
    j["out"] = tables_json(s.out);

    json sensors = json::array();
    for (const auto& [id, count] : s.http_sensor) sensors.push_back({{"sensor", id}, {"count", count}});
    j["http_sensor"] = sensors;

    json monitor = json::array();
    for (const auto& c : s.monitor) monitor.push_back({{"rule", rule_json(c.rule)}, {"count", c.count}});
    j["monitor"] = monitor;

    return j.dump(indent);
}

SwitchState load_state(const std::string& text) {
    const json j = json::parse(text);
    SwitchState s;
    s.switch_id = j.at("switch_id").get<SwitchId>();
    const auto mode = j.at("security_mode").get<std::string>();
    if (mode == "blacklist") s.security_mode = SecurityMode::Blacklist;
    else if (mode == "whitelist") s.security_mode = SecurityMode::Whitelist;
    else throw std::invalid_argument("unknown security_mode: " + mode);

    j.at("ports").get_to(s.ports);
    j.at("gnb_ports").get_to(s.gnb_ports);
    s.core_port = opt_from<Port>(j.at("core_port"));
    for (const auto& e : j.at("neighbor_ports")) {
        s.neighbor_ports[e.at("switch").get<SwitchId>()] = e.at("port").get<Port>();
    }
    for (const auto& e : j.at("mac_table")) {
        auto mac = MacAddress::parse(e.at("mac").get<std::string>());
        if (!mac) throw std::invalid_argument("bad MAC address");
        s.mac_table[*mac] = e.at("port").get<Port>();
    }
    for (const auto& e : j.at("teids")) {
        const Teid teid{e.at("teid").get<std::uint32_t>()};
        if (e.contains("gnb_port")) s.teids[teid] = GnbPort{e.at("gnb_port").get<Port>()};
        else s.teids[teid] = e.at("switch").get<SwitchId>();
    }
    for (const auto& e : j.at("nexthop")) {
        s.nexthop[e.at("destination").get<SwitchId>()] = e.at("nexthop").get<SwitchId>();
    }
    for (const auto& e : j.at("ue_ids")) s.ue_ids.insert(UeId{e.get<std::uint32_t>()});
    for (const auto& e : j.at("ipv4_down_teid")) {
        s.ipv4_down_teid[parse_ip(e.at("ipv4"))] = Teid{e.at("teid").get<std::uint32_t>()};
    }
    s.ipv4_in_network = lpm_from(j.at("ipv4_in_network"));
    s.in = tables_from(j.at("in"));
    s.out = tables_from(j.at("out"));
    for (const auto& e : j.at("http_sensor")) {
        s.http_sensor[e.at("sensor").get<std::uint16_t>()] = e.at("count").get<std::uint64_t>();
    }
    for (const auto& e : j.at("monitor")) {
        s.monitor.push_back({rule_from(e.at("rule")), e.at("count").get<std::uint64_t>()});
    }
    return s;
}

void write_counters_csv(std::ostream& out, const SwitchState& s, bool header) {
    if (header) out << "switch_id,counter_name,value\n";
    const int id = s.switch_id;
    for (std::size_t i = 0; i < s.monitor.size(); ++i) {
        out << id << ",monitor_rule_" << i << ',' << s.monitor[i].count << '\n';
    }
    for (const auto& [sensor, count] : s.http_sensor) {
        out << id << ",http_sensor_" << sensor << ',' << count << '\n';
    }
    out << id << ",ue_ids," << s.ue_ids.size() << '\n';
}

}  // namespace cellgrid::dataplane
