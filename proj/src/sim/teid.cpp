#include "cellgrid/sim/teid.hpp"

#include <algorithm>
#include <set>

#include "cellgrid/dataplane/pipeline.hpp"
#include "cellgrid/model/rng.hpp"
#include "cellgrid/wire/frame.hpp"

namespace cellgrid::sim {

using namespace cellgrid::wire;
using dataplane::process_packet;
using model::NodeKind;

namespace {

const MacAddress kGnbMac{{0x02, 0, 0, 0, 0xfe, 0x01}};
const MacAddress kUpfMac{{0x02, 0, 0, 0, 0xfe, 0x02}};
const MacAddress kCtrlMac{{0x02, 0, 0, 0, 0xfe, 0x03}};

Bytes probe_frame(Teid teid) {
    GtpFrameSpec spec;
    spec.eth_src = kGnbMac;
    spec.eth_dst = kUpfMac;
    spec.outer = {Ipv4Address::from_octets(192, 168, 0, 2), Ipv4Address::from_octets(192, 168, 0, 1)};
    spec.teid = teid;
    spec.inner = {Ipv4Address::from_octets(10, 45, 0, 1), Ipv4Address::from_octets(10, 45, 0, 2)};
    spec.inner_ports = {4000, 4000};
    return build_gtp_frame(spec, {});
}

}  // namespace

std::optional<SwitchId> Fleet::peer(SwitchId at, Port egress) const {
    return switches.at(at).neighbor_on(egress);
}

Fleet build_fleet(const model::Network& net) {
    Fleet fleet;
    fleet.graph = net.switch_graph();
    for (NodeId node : net.of_kind(NodeKind::Switch)) {
        const SwitchId id = net.switch_id(node);
        auto& s = fleet.switches[id];
        s.switch_id = id;
        Port next_gnb = kGnbPortBase;
        for (NodeId m : net.neighbors(node)) {
            switch (net.node(m).kind) {
                case NodeKind::Switch: {
                    const SwitchId peer = net.switch_id(m);
                    s.connect_switch(peer, fleet.port_toward(id, peer));
                    break;
                }
                case NodeKind::Gnb:
                    s.attach_gnb(next_gnb);
                    fleet.gnb_ports[m] = {id, next_gnb++};
                    break;
                case NodeKind::Upf: s.attach_core(kUpfPort); break;
                case NodeKind::Amf: s.ports.insert(kAmfPort); break;
                case NodeKind::Ue: break;
            }
        }
    }
    return fleet;
}

std::size_t install_routes(Fleet& fleet, controller::Controller& ctl) {
    const auto msgs = ctl.on_topology_change(fleet.graph);
    for (const auto& m : msgs) {
        auto v = process_packet(fleet.switches.at(m.switch_id), encode_ucp(m, MacAddress::broadcast(), kCtrlMac),
                                kControllerPort);
        if (auto* r = std::get_if<dataplane::Reply>(&v)) ctl.handle_reply(r->message);
    }
    return msgs.size();
}

TeidRun run_teid_announcement(const model::Network& net, const std::vector<TeidBirth>& births,
                              const TeidSimConfig& cfg) {
    TeidRun run{{}, build_fleet(net)};
    Fleet& fleet = run.fleet;
    TeidReport& rep = run.report;
    controller::Controller ctl;
    rep.route_messages = install_routes(fleet, ctl);

    for (const auto& b : births) {
        if (!fleet.gnb_ports.count(b.gnb)) throw UnknownGnb("node " + std::to_string(b.gnb) + " is not a gNB");
    }

    EventQueue queue(cfg.event_budget);
    std::map<Teid, std::map<SwitchId, Time>> learned;

    std::function<void(SwitchId, const Bytes&, Port)> deliver;
    auto emit = [&](SwitchId at, const dataplane::PipelineVerdict& v) {
        if (const auto* f = std::get_if<dataplane::Forward>(&v)) {
            for (Port p : f->egress) {
                const auto peer = fleet.peer(at, p);
                if (!peer) continue;
                ++rep.messages_sent;
                const Port in = fleet.port_toward(*peer, at);
                const Bytes frame = f->frame;
                queue.after(*fleet.graph.weight(at, *peer), EventKind::MessageDelivery,
                            [&, peer = *peer, frame, in] { deliver(peer, frame, in); });
            }
        } else if (const auto* d = std::get_if<dataplane::Drop>(&v)) {
            if (d->reason == dataplane::DropReason::Duplicate) ++rep.duplicates;
        }
    };
    auto note = [&](SwitchId at, Teid t) {
        if (fleet.switches.at(at).teids.count(t)) learned[t].emplace(at, queue.now());
    };
    deliver = [&](SwitchId at, const Bytes& frame, Port ingress) {
        ++rep.messages_delivered;
        const Teid t = std::get<Teid>(decode_ucp(frame).payload);
        const auto v = process_packet(fleet.switches.at(at), frame, ingress);
        note(at, t);
        emit(at, v);
    };

    for (const auto& b : births) {
        queue.schedule(b.time, EventKind::TeidBirth, [&, b] {
            const auto [sw, port] = fleet.gnb_ports.at(b.gnb);
            const auto frame = encode_ucp(UcpMessage{0, make_cmi(Opcode::NewTeid), b.teid}, MacAddress::broadcast(), kGnbMac);
            const auto v = process_packet(fleet.switches.at(sw), frame, port);
            note(sw, b.teid);
            emit(sw, v);
        });
    }
    queue.run();
    rep.quiescence_time = queue.now();

    for (const auto& b : births) {
        const auto& times = learned[b.teid];
        AdvertRecord a;
        a.teid = b.teid;
        a.owner = fleet.gnb_ports.at(b.gnb).first;
        a.birth = b.time;
        Time last = b.time;
        for (const auto& [sw, t] : times) last = std::max(last, t);
        a.duration = last - b.time;
        a.switches_learned = times.size();
        rep.adverts.push_back(a);
    }

    // Retrieval: a query walks next hops to the owner, the answer walks back to the asker.
    if (cfg.queries > 0 && !births.empty()) {
        model::Rng rng(cfg.seed);
        const Time issued = queue.now();
        std::vector<SwitchId> ids;
        for (const auto& [id, s] : fleet.switches) ids.push_back(id);
        auto step = [&](SwitchId at, SwitchId toward) -> SwitchId {
            const auto& nh = fleet.switches.at(at).nexthop;
            auto it = nh.find(toward);
            if (it == nh.end()) {
                throw NonConvergence("switch " + std::to_string(at) + " has no route to " + std::to_string(toward));
            }
            return it->second;
        };
        std::function<void(std::size_t, SwitchId, bool)> hop;
        hop = [&](std::size_t qi, SwitchId at, bool answering) {
            QueryRecord& q = rep.queries[qi];
            if (!answering) {
                const auto& teids = fleet.switches.at(at).teids;
                auto it = teids.find(q.teid);
                if (it == teids.end()) throw NonConvergence("TEID unknown at switch " + std::to_string(at));
                if (std::holds_alternative<dataplane::GnbPort>(it->second)) {
                    answering = true;
                } else {
                    const SwitchId next = step(at, std::get<SwitchId>(it->second));
                    ++q.hops;
                    ++rep.messages_sent;
                    queue.after(*fleet.graph.weight(at, next), EventKind::MessageDelivery, [&, qi, next] {
                        ++rep.messages_delivered;
                        hop(qi, next, false);
                    });
                    return;
                }
            }
            if (at == q.from) {
                q.duration = queue.now() - q.issued;
                return;
            }
            const SwitchId next = step(at, q.from);
            ++rep.messages_sent;
            queue.after(*fleet.graph.weight(at, next), EventKind::MessageDelivery, [&, qi, next] {
                ++rep.messages_delivered;
                hop(qi, next, true);
            });
        };
        for (std::size_t k = 0; k < cfg.queries; ++k) {
            const auto& b = births[rng.uniform(0, births.size() - 1)];
            QueryRecord q;
            q.teid = b.teid;
            q.from = ids[rng.uniform(0, ids.size() - 1)];
            q.owner = fleet.gnb_ports.at(b.gnb).first;
            q.issued = issued;
            rep.queries.push_back(q);
        }
        for (std::size_t k = 0; k < rep.queries.size(); ++k) {
            queue.schedule(issued, EventKind::QueryInjection, [&, k] { hop(k, rep.queries[k].from, false); });
        }
        queue.run();
    }
    rep.events = queue.processed();
    return run;
}

std::optional<std::vector<SwitchId>> teid_chain(const Fleet& fleet, SwitchId start, Teid teid) {
    std::vector<SwitchId> path{start};
    std::set<SwitchId> seen{start};
    SwitchId at = start;
    while (true) {
        const auto& s = fleet.switches.at(at);
        auto it = s.teids.find(teid);
        if (it == s.teids.end()) return std::nullopt;
        if (std::holds_alternative<dataplane::GnbPort>(it->second)) return path;
        auto nh = s.nexthop.find(std::get<SwitchId>(it->second));
        if (nh == s.nexthop.end()) return std::nullopt;
        at = nh->second;
        if (!seen.insert(at).second || path.size() > fleet.switches.size()) return std::nullopt;
        path.push_back(at);
    }
}

std::optional<std::vector<SwitchId>> gtp_walk(Fleet& fleet, SwitchId start, Teid teid) {
    const Bytes frame = probe_frame(teid);
    std::vector<SwitchId> path{start};
    std::set<SwitchId> seen{start};
    SwitchId at = start;
    const auto& first = fleet.switches.at(start).neighbor_ports;
    if (first.empty()) {
        // Nowhere to come from: only the owner itself can answer.
        auto it = fleet.switches.at(start).teids.find(teid);
        if (it != fleet.switches.at(start).teids.end() && std::holds_alternative<dataplane::GnbPort>(it->second)) {
            return path;
        }
        return std::nullopt;
    }
    Port ingress = first.begin()->second;
    while (true) {
        const auto v = process_packet(fleet.switches.at(at), frame, ingress);
        const auto* f = std::get_if<dataplane::Forward>(&v);
        if (!f || f->egress.size() != 1) return std::nullopt;
        const auto& gnbs = fleet.switches.at(at).gnb_ports;
        if (gnbs.count(f->egress.front())) return path;
        const auto peer = fleet.peer(at, f->egress.front());
        if (!peer || !seen.insert(*peer).second) return std::nullopt;
        ingress = fleet.port_toward(*peer, at);
        at = *peer;
        path.push_back(at);
    }
}

std::vector<TeidBirth> births_for_every_gnb(const model::Network& net) {
    std::vector<TeidBirth> out;
    std::uint32_t next = 1;
    for (NodeId g : net.of_kind(NodeKind::Gnb)) out.push_back({0, Teid{next++}, g});
    return out;
}

}  // namespace cellgrid::sim
