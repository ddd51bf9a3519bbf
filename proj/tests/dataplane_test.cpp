#include <random>
#include <sstream>

#include "cellgrid/dataplane/lpm.hpp"
#include "cellgrid/dataplane/pipeline.hpp"
#include "cellgrid/dataplane/state_io.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cellgrid;
using namespace cellgrid::dataplane;
using namespace cellgrid::wire;
using namespace fixture;

namespace {

Ipv4Address addr(std::uint8_t a, std::uint8_t b, std::uint8_t c, std::uint8_t d) {
    return Ipv4Address::from_octets(a, b, c, d);
}

// Edge switch with two UEs behind distinct gNBs, downlink TEIDs learned, both authorized.
SwitchState two_cell_switch() {
    SwitchState s = edge_switch();
    s.ipv4_in_network.insert(addr(10, 45, 0, 0), 16);
    REQUIRE(std::holds_alternative<Drop>(
        process_packet(s, ucp_frame(0, Opcode::NewTeid, Teid{7}), 2)));
    REQUIRE(std::holds_alternative<Drop>(
        process_packet(s, ucp_frame(0, Opcode::NewTeid, Teid{8}), 1)));
    REQUIRE(std::holds_alternative<Forward>(
        process_packet(s, build_gtp_frame(downlink(ue(3), Teid{7}), {}), 9)));
    REQUIRE(std::holds_alternative<Forward>(
        process_packet(s, build_gtp_frame(downlink(ue(2), Teid{8}), {}), 9)));
    return s;
}

UcpMessage reply_of(const PipelineVerdict& v) { return as<dataplane::Reply>(v).message; }

Opcode reply_op(const PipelineVerdict& v) { return reply_of(v).cmi.opcode(); }

const ReplyData& reply_data(const UcpMessage& m) { return std::get<wire::Reply>(m.payload).data; }

}  // namespace

TEST_CASE("lpm lookup picks the most specific entry") {
    LpmTable t;
    t.insert(addr(10, 0, 0, 0), 8, 1);
    t.insert(addr(10, 1, 0, 0), 16, 2);
    auto hit = lpm_lookup(t, addr(10, 1, 2, 3));
    REQUIRE(hit);
    CHECK(hit->length == 16);
    CHECK(hit->action == 2);
    CHECK_FALSE(lpm_lookup(t, addr(11, 0, 0, 1)));

    t.insert(addr(0, 0, 0, 0), 0, 3);
    CHECK(lpm_lookup(t, addr(11, 0, 0, 1))->length == 0);
    CHECK(lpm_lookup(t, addr(255, 255, 255, 255)));
}

TEST_CASE("lpm keeps one entry per prefix and length") {
    LpmTable t;
    CHECK(t.insert(addr(10, 1, 2, 3), 16, 1));
    CHECK_FALSE(t.insert(addr(10, 1, 9, 9), 16, 5));  // same masked prefix
    CHECK(t.size() == 1);
    CHECK(t.lookup(addr(10, 1, 0, 0))->action == 5);
    CHECK(t.erase(addr(10, 1, 0, 0), 16));
    CHECK(t.empty());
    CHECK_FALSE(t.erase(addr(10, 1, 0, 0), 16));
}

TEST_CASE("lpm agrees with a brute-force scan") {
    std::mt19937_64 rng(7);
    std::size_t queries = 0;
    for (int table = 0; table < 40; ++table) {
        LpmTable t;
        std::map<std::pair<std::uint32_t, unsigned>, std::uint32_t> truth;
        const int n = 1 + static_cast<int>(rng() % 60);
        // Cluster prefixes under a few roots so that nesting actually happens.
        const std::uint32_t roots[] = {0x0a000000u, 0xc0a80000u, static_cast<std::uint32_t>(rng())};
        for (int i = 0; i < n; ++i) {
            const unsigned len = static_cast<unsigned>(rng() % 33);
            std::uint32_t p = roots[rng() % 3] ^ static_cast<std::uint32_t>(rng() & 0x0000ffffu);
            p &= prefix_mask(static_cast<std::uint8_t>(len));
            const auto action = static_cast<std::uint32_t>(rng());
            t.insert(Ipv4Address{p}, static_cast<std::uint8_t>(len), action);
            truth[{p, len}] = action;
        }
        std::vector<oracle::LpmEntry> flat;
        for (const auto& [k, a] : truth) flat.push_back({k.first, k.second, a});
        REQUIRE(t.size() == flat.size());

        for (int q = 0; q < 500; ++q, ++queries) {
            std::uint32_t a = static_cast<std::uint32_t>(rng());
            if (q % 2 == 0) a = (roots[rng() % 3] & 0xffff0000u) | (a & 0xffffu);
            const auto got = t.lookup(Ipv4Address{a});
            const auto want = oracle::lpm_scan(flat, a);
            REQUIRE(got.has_value() == want.has_value());
            if (want) {
                CHECK(got->length == want->length);
                CHECK(got->prefix.value == want->prefix);
                CHECK(got->action == want->action);
            }
        }
    }
    CHECK(queries >= 10000);
}

TEST_CASE("process_packet examples") {
    SUBCASE("UE count query answers with the registry size") {
        SwitchState s = edge_switch(4);
        for (std::uint32_t id : {11u, 12u, 13u}) process_packet(s, initial_ue_frame(UeId{id}), 1);
        const auto v = process_packet(s, ucp_frame(4, Opcode::GetUeCount), 9);
        REQUIRE(std::holds_alternative<dataplane::Reply>(v));
        const auto m = reply_of(v);
        CHECK(m.cmi.opcode() == Opcode::ReplyNoModification);
        CHECK(m.switch_id == 4);
        CHECK(std::get<Count>(reply_data(m)).value == 3);
        CHECK(as<dataplane::Reply>(v).egress == 9);
    }
    SUBCASE("GTP to an unauthorized destination goes to the core and is counted") {
        SwitchState s = edge_switch();
        s.monitor.push_back({MonitorRule{}, 0});
        const auto v = process_packet(
            s, build_gtp_frame(uplink(ue(2), addr(8, 8, 8, 8), Teid{5}, kProtoUdp, {1, 2}), {}), 1);
        CHECK(std::holds_alternative<DeliverToCore>(v));
        CHECK(s.monitor[0].count == 1);
    }
    SUBCASE("plain IPv4 follows the learned MAC") {
        SwitchState s = edge_switch();
        const MacAddress host{{0x02, 0, 0, 0, 0, 0x77}};
        auto learn = build_ethernet({kUpfMac, host, 0x0800}, Bytes(20, 0));
        process_packet(s, learn, 2);
        auto frame = build_ethernet({host, kUpfMac, 0x0800}, Bytes(20, 0));
        const auto v = process_packet(s, frame, 9);
        REQUIRE(std::holds_alternative<Forward>(v));
        CHECK(as<Forward>(v).egress == std::vector<Port>{2});
        CHECK(as<Forward>(v).frame == frame);
    }
    SUBCASE("unknown destination floods every other port") {
        SwitchState s = edge_switch();
        const auto v = process_packet(s, build_ethernet({kUpfMac, kGnbMac, 0x0800}, {}), 1);
        CHECK(as<Forward>(v).egress == std::vector<Port>{2, 9});
    }
    SUBCASE("destination learned on the ingress port is filtered") {
        SwitchState s = edge_switch();
        process_packet(s, build_ethernet({kUpfMac, kGnbMac, 0x0800}, {}), 1);
        const auto v = process_packet(s, build_ethernet({kGnbMac, kUpfMac, 0x0800}, {}), 1);
        CHECK(as<Drop>(v).reason == DropReason::Filtered);
    }
    SUBCASE("parse failures and unknown opcodes") {
        SwitchState s = edge_switch();
        CHECK(as<Drop>(process_packet(s, Bytes(5, 0), 1)).reason == DropReason::Parse);
        Bytes bad = ucp_frame(1, Opcode::GetUeCount);
        bad[14] = 0x15;
        CHECK(as<Drop>(process_packet(s, bad, 1)).reason == DropReason::BadUcp);
        Bytes short_teid = ucp_frame(1, Opcode::NewTeid, Teid{1});
        short_teid.pop_back();
        CHECK(as<Drop>(process_packet(s, short_teid, 1)).reason == DropReason::Parse);
    }
}

TEST_CASE("apply_security examples") {
    auto headers = [](std::uint8_t proto, L4Ports ports) {
        return parse_stack(build_gtp_frame(uplink(ue(2), ue(3), Teid{1}, proto, ports), {}));
    };
    SwitchState s = edge_switch();
    s.in.tcp_blist.insert(8080);
    CHECK(apply_security(s, headers(kProtoTcp, {5000, 8080}), Direction::In) == SecurityDecision::Deny);
    CHECK(apply_security(s, headers(kProtoUdp, {5000, 8080}), Direction::In) == SecurityDecision::Allow);
    CHECK(apply_security(s, headers(kProtoTcp, {5000, 8080}), Direction::Out) == SecurityDecision::Allow);

    SwitchState open = edge_switch();
    CHECK(apply_security(open, headers(kProtoTcp, {1, 2}), Direction::In) == SecurityDecision::Allow);

    SwitchState closed = edge_switch();
    closed.security_mode = SecurityMode::Whitelist;
    CHECK(apply_security(closed, headers(kProtoTcp, {1, 2}), Direction::In) == SecurityDecision::Deny);
    closed.in.ipv4_wlist.insert(addr(10, 45, 0, 0), 24);
    CHECK(apply_security(closed, headers(kProtoTcp, {1, 2}), Direction::In) == SecurityDecision::Allow);
    closed.in.tcp_wlist.insert(443);
    CHECK(apply_security(closed, headers(kProtoTcp, {1, 2}), Direction::In) == SecurityDecision::Deny);
    CHECK(apply_security(closed, headers(kProtoTcp, {1, 443}), Direction::In) == SecurityDecision::Allow);
}

TEST_CASE("apply_monitoring examples") {
    SwitchState s = edge_switch();
    s.http_sensor[2] = 41;
    apply_monitoring(s, parse_stack(heartbeat_frame(2)));
    CHECK(s.http_sensor[2] == 42);

    MonitorRule ip_rule;
    ip_rule.dst = Prefix{addr(10, 45, 0, 0), 24};
    MonitorRule tcp_rule;
    tcp_rule.protocol = kProtoTcp;
    tcp_rule.port = 443;
    MonitorRule udp_rule;
    udp_rule.protocol = kProtoUdp;
    s.monitor = {{ip_rule, 0}, {tcp_rule, 0}, {udp_rule, 0}};

    const auto h = parse_stack(build_gtp_frame(uplink(ue(2), ue(3), Teid{1}, kProtoTcp, {3000, 443}), {}));
    // Brute-force expectation: evaluate every field of every rule by hand.
    const std::vector<bool> expect{true, true, false};
    const auto before = s.monitor;
    apply_monitoring(s, h);
    for (std::size_t i = 0; i < expect.size(); ++i) {
        CHECK(s.monitor[i].count == before[i].count + (expect[i] ? 1 : 0));
        CHECK(rule_matches(s.monitor[i].rule, h) == expect[i]);
    }

    const auto snapshot = s;
    const auto miss = parse_stack(
        build_gtp_frame(uplink(addr(1, 1, 1, 1), addr(2, 2, 2, 2), Teid{1}, kProtoSctp, {1, 2}), {}));
    apply_monitoring(s, miss);
    CHECK(s == snapshot);
}

TEST_CASE("intra_cellular_forward examples") {
    SUBCASE("local gNB") {
        SwitchState s = edge_switch();
        s.ipv4_in_network.insert(addr(10, 45, 0, 0), 16);
        s.ipv4_down_teid[ue(3)] = Teid{7};
        s.teids[Teid{7}] = GnbPort{2};
        const auto hit =
            intra_cellular_forward(s, parse_stack(build_gtp_frame(uplink(ue(2), ue(3), Teid{1}, kProtoUdp, {1, 2}), {})));
        REQUIRE(hit);
        CHECK(hit->teid == Teid{7});
        CHECK(hit->locus == TeidLocus{GnbPort{2}});
    }
    SUBCASE("gNB behind another switch") {
        SwitchState s = edge_switch(3);
        s.connect_switch(4, 20);
        s.ipv4_in_network.insert(addr(10, 45, 0, 0), 16);
        s.ipv4_down_teid[ue(3)] = Teid{9};
        s.teids[Teid{9}] = SwitchId{5};
        s.nexthop[5] = 4;
        const auto h = parse_stack(build_gtp_frame(uplink(ue(2), ue(3), Teid{1}, kProtoUdp, {1, 2}), {}));
        const auto hit = intra_cellular_forward(s, h);
        REQUIRE(hit);
        CHECK(hit->teid == Teid{9});
        CHECK(hit->locus == TeidLocus{SwitchId{4}});

        s.nexthop.erase(5);  // stale: owner known, no route
        CHECK_FALSE(intra_cellular_forward(s, h));
    }
    SUBCASE("unauthorized destination") {
        SwitchState s = edge_switch();
        s.ipv4_down_teid[ue(3)] = Teid{7};
        s.teids[Teid{7}] = GnbPort{2};
        CHECK_FALSE(intra_cellular_forward(
            s, parse_stack(build_gtp_frame(uplink(ue(2), ue(3), Teid{1}, kProtoUdp, {1, 2}), {}))));
    }
}

TEST_CASE("ngap_register examples") {
    SwitchState s = edge_switch();
    const auto v = process_packet(s, initial_ue_frame(UeId{0x2A}), 1);
    CHECK(std::holds_alternative<DeliverToCore>(v));
    CHECK(s.ue_ids == std::set<UeId>{UeId{42}});
    process_packet(s, initial_ue_frame(UeId{0x2A}), 1);
    CHECK(s.ue_ids.size() == 1);

    const auto other = build_ngap_frame(kGnbMac, kUpfMac, {addr(192, 168, 1, 10), addr(192, 168, 1, 2)},
                                        {kNgapPort, kNgapPort}, Bytes{1, 2, 3, 4, 5, 6, 7, 8});
    CHECK(std::holds_alternative<DeliverToCore>(process_packet(s, other, 1)));
    CHECK(s.ue_ids.size() == 1);

    // From the AMF side the frame is switched normally.
    CHECK(std::holds_alternative<Forward>(process_packet(s, initial_ue_frame(UeId{43}), 9)));
    CHECK(s.ue_ids.size() == 2);
}

TEST_CASE("handle_ucp path install") {
    SwitchState s = edge_switch(3);
    s.connect_switch(2, 20);
    s.connect_switch(4, 21);
    s.nexthop[9] = 2;

    const UcpMessage path{3, make_cmi(Opcode::Path), SwitchPath{9, {4, 7, 9}}};
    auto v = handle_ucp(s, path, 30);
    REQUIRE(std::holds_alternative<dataplane::Reply>(v));
    CHECK(reply_op(v) == Opcode::NexthopUpdated);
    CHECK(std::get<ReplyTarget>(reply_data(reply_of(v))).id == 9);
    CHECK(s.nexthop[9] == 4);

    v = handle_ucp(s, path, 30);
    CHECK(as<Drop>(v).reason == DropReason::Consumed);
    CHECK(s.nexthop[9] == 4);

    // A path listing this switch installs the hop after it.
    CHECK(reply_op(handle_ucp(s, {3, make_cmi(Opcode::Path), SwitchPath{8, {1, 3, 2, 8}}}, 30)) ==
          Opcode::NexthopUpdated);
    CHECK(s.nexthop[8] == 2);

    // Not a neighbor, or addressed at itself.
    CHECK(reply_op(handle_ucp(s, {3, make_cmi(Opcode::Path), SwitchPath{9, {6, 9}}}, 30)) ==
          Opcode::ModificationFailed);
    CHECK(reply_op(handle_ucp(s, {3, make_cmi(Opcode::Path), SwitchPath{3, {4, 3}}}, 30)) ==
          Opcode::ModificationFailed);
    CHECK(s.nexthop[9] == 4);

    CHECK(path_next_hop(3, {9, {}}) == std::nullopt);
    CHECK(path_next_hop(3, {9, {1, 3}}) == std::nullopt);
}

TEST_CASE("handle_ucp security and registry") {
    SwitchState s = edge_switch();
    auto v = process_packet(s, ucp_frame(1, Opcode::AddWhitelist, addr(10, 45, 0, 7)), 9);
    CHECK(reply_op(v) == Opcode::ModificationSucceeded);
    CHECK(reply_of(v).switch_id == 1);
    v = process_packet(s, ucp_frame(1, Opcode::GetWhitelist), 9);
    CHECK(std::get<Ipv4List>(reply_data(reply_of(v))) == Ipv4List{addr(10, 45, 0, 7)});
    CHECK(reply_op(process_packet(s, ucp_frame(1, Opcode::AddWhitelist, addr(10, 45, 0, 7)), 9)) ==
          Opcode::ReplyNoModification);

    CHECK(reply_op(handle_ucp(s, {1, make_cmi(Opcode::DeleteUeId), UeId{5}}, 9)) ==
          Opcode::ModificationFailed);
    s.ue_ids.insert(UeId{5});
    CHECK(reply_op(handle_ucp(s, {1, make_cmi(Opcode::DeleteUeId), UeId{5}}, 9)) ==
          Opcode::ModificationSucceeded);
    CHECK(s.ue_ids.empty());

    CHECK(reply_op(handle_ucp(s, {1, make_cmi(Opcode::GetMonitoringRule), RuleIndex{0}}, 9)) ==
          Opcode::ModificationFailed);

    // Replies are not requests.
    const auto r = make_reply(1, Opcode::ModificationSucceeded, 0x10);
    CHECK(reply_op(handle_ucp(s, r, 9)) == Opcode::ModificationFailed);
}

TEST_CASE("UCP get after add is coherent") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 200; ++round) {
        SwitchState s = edge_switch();
        std::set<Ipv4Address> white, black, in_net;
        std::vector<MonitorRule> rules;
        for (int i = 0; i < 20; ++i) {
            const Ipv4Address a{static_cast<std::uint32_t>(rng() % 64) | 0x0a2d0000u};
            switch (rng() % 4) {
                case 0: {
                    auto v = handle_ucp(s, {1, make_cmi(Opcode::AddWhitelist), a}, 9);
                    white.insert(a);
                    v = handle_ucp(s, {1, make_cmi(Opcode::GetWhitelist), {}}, 9);
                    const auto list = std::get<Ipv4List>(reply_data(reply_of(v)));
                    CHECK(std::set<Ipv4Address>(list.begin(), list.end()) == white);
                    break;
                }
                case 1: {
                    handle_ucp(s, {1, make_cmi(Opcode::AddBlacklist), a}, 9);
                    black.insert(a);
                    const auto v = handle_ucp(s, {1, make_cmi(Opcode::GetBlacklist), {}}, 9);
                    const auto list = std::get<Ipv4List>(reply_data(reply_of(v)));
                    CHECK(std::set<Ipv4Address>(list.begin(), list.end()) == black);
                    break;
                }
                case 2: {
                    MonitorRule r;
                    r.src = Prefix{a, static_cast<std::uint8_t>(rng() % 33)};
                    if (rng() % 2) r.port = static_cast<std::uint16_t>(rng());
                    CHECK(reply_op(handle_ucp(s, {1, make_cmi(Opcode::AddMonitoringRule), r}, 9)) ==
                          Opcode::ModificationSucceeded);
                    rules.push_back(r);
                    const auto idx = static_cast<std::uint8_t>(rules.size() - 1);
                    auto v = handle_ucp(s, {1, make_cmi(Opcode::GetMonitoringRule), RuleIndex{idx}}, 9);
                    CHECK(std::get<MonitorRule>(reply_data(reply_of(v))) == r);
                    v = handle_ucp(s, {1, make_cmi(Opcode::GetMonitoringRuleCount), {}}, 9);
                    CHECK(std::get<Count>(reply_data(reply_of(v))).value == rules.size());
                    break;
                }
                default: {
                    handle_ucp(s, {1, make_cmi(Opcode::AddUeIpv4), a}, 9);
                    in_net.insert(a);
                    for (auto x : in_net) CHECK(s.ipv4_in_network.matches(x));
                    break;
                }
            }
        }
    }
}

TEST_CASE("monitoring rule table is capped at 256") {
    SwitchState s = edge_switch();
    for (int i = 0; i < 256; ++i) {
        REQUIRE(reply_op(handle_ucp(s, {1, make_cmi(Opcode::AddMonitoringRule), MonitorRule{}}, 9)) ==
                Opcode::ModificationSucceeded);
    }
    CHECK(reply_op(handle_ucp(s, {1, make_cmi(Opcode::AddMonitoringRule), MonitorRule{}}, 9)) ==
          Opcode::ModificationFailed);
}

TEST_CASE("TEID announcements flood once") {
    // Line 1 - 2 - 3, gNB on switch 1 port 1.
    SwitchState a = edge_switch(1), b, c;
    b.switch_id = 2;
    c.switch_id = 3;
    a.connect_switch(2, 10);
    b.connect_switch(1, 11);
    b.connect_switch(3, 12);
    c.connect_switch(2, 13);

    auto v = process_packet(a, ucp_frame(0, Opcode::NewTeid, Teid{77}), 1);
    REQUIRE(std::holds_alternative<Forward>(v));
    CHECK(as<Forward>(v).egress == std::vector<Port>{10});
    CHECK(a.teids[Teid{77}] == TeidLocus{GnbPort{1}});
    const auto announce = decode_ucp(as<Forward>(v).frame);
    CHECK(announce.switch_id == 1);

    v = process_packet(b, as<Forward>(v).frame, 11);
    CHECK(as<Forward>(v).egress == std::vector<Port>{12});
    CHECK(b.teids[Teid{77}] == TeidLocus{SwitchId{1}});
    const Bytes relayed = as<Forward>(v).frame;

    v = process_packet(c, relayed, 13);
    CHECK(as<Drop>(v).reason == DropReason::Consumed);
    CHECK(c.teids[Teid{77}] == TeidLocus{SwitchId{1}});
    CHECK(as<Drop>(process_packet(c, relayed, 13)).reason == DropReason::Duplicate);

    // Removal retraces the same flood.
    v = process_packet(a, ucp_frame(0, Opcode::RemoveTeid, Teid{77}), 1);
    v = process_packet(b, as<Forward>(v).frame, 11);
    CHECK_FALSE(b.teids.count(Teid{77}));
    process_packet(c, as<Forward>(v).frame, 13);
    CHECK(c.teids.empty());
}

TEST_CASE("intra-cellular rewrite keeps the inner packet intact") {
    std::mt19937_64 rng(3);
    SwitchState s = two_cell_switch();
    for (int i = 0; i < 500; ++i) {
        Bytes app(rng() % 64);
        for (auto& b : app) b = static_cast<std::uint8_t>(rng());
        const auto seq = static_cast<std::uint32_t>(rng() & 0xffffff);
        const bool to_three = rng() % 2;
        const auto spec = uplink(to_three ? ue(2) : ue(3), to_three ? ue(3) : ue(2),
                                 Teid{static_cast<std::uint32_t>(rng())}, kProtoUdp,
                                 {static_cast<std::uint16_t>(rng()), 9000}, seq);
        const Bytes in = build_gtp_frame(spec, app);
        const auto v = process_packet(s, in, to_three ? 1 : 2);
        REQUIRE(std::holds_alternative<Forward>(v));
        const auto& fwd = as<Forward>(v);
        CHECK(fwd.egress == std::vector<Port>{static_cast<Port>(to_three ? 2 : 1)});

        const auto hin = parse_stack(in);
        const auto hout = parse_stack(fwd.frame);
        CHECK(hout.gtp->teid == s.ipv4_down_teid.at(spec.inner.dst));
        CHECK(hout.gtp->sequence_number == seq);
        CHECK(Bytes(in.begin() + static_cast<long>(hin.offsets.inner_l3), in.end()) ==
              Bytes(fwd.frame.begin() + static_cast<long>(hout.offsets.inner_l3), fwd.frame.end()));
    }
}

TEST_CASE("blacklisted flows are never forwarded again") {
    std::mt19937_64 rng(5);
    for (int round = 0; round < 300; ++round) {
        SwitchState s = two_cell_switch();
        const bool from_two = rng() % 2;
        const auto proto = rng() % 2 ? kProtoTcp : kProtoUdp;
        const L4Ports ports{static_cast<std::uint16_t>(rng()), static_cast<std::uint16_t>(rng())};
        const Bytes frame = build_gtp_frame(
            uplink(from_two ? ue(2) : ue(3), from_two ? ue(3) : ue(2), Teid{1}, proto, ports), {});
        const Port ingress = from_two ? 1 : 2;
        REQUIRE(std::holds_alternative<Forward>(process_packet(s, frame, ingress)));

        switch (rng() % 3) {
            case 0:
                process_packet(s, ucp_frame(1, Opcode::AddBlacklist, from_two ? ue(3) : ue(2)), 9);
                break;
            case 1:
                process_packet(s, ucp_frame(1, Opcode::AddBlacklist, from_two ? ue(2) : ue(3)), 9);
                break;
            default:
                (proto == kProtoTcp ? s.in.tcp_blist : s.in.udp_blist).insert(ports.dst);
                break;
        }
        for (int replay = 0; replay < 3; ++replay) {
            const auto v = process_packet(s, frame, ingress);
            REQUIRE(std::holds_alternative<Drop>(v));
            CHECK(as<Drop>(v).reason == DropReason::Security);
        }
    }
}

TEST_CASE("heartbeat counters are exact among noise") {
    std::mt19937_64 rng(9);
    SwitchState s = two_cell_switch();
    std::map<std::uint16_t, std::uint64_t> sent;
    for (int i = 0; i < 5000; ++i) {
        const auto kind = rng() % 4;
        if (kind == 0) {
            const auto sensor = static_cast<std::uint16_t>(rng() % 8);
            ++sent[sensor];
            process_packet(s, heartbeat_frame(sensor, static_cast<std::uint32_t>(i)), 1);
        } else if (kind == 1) {
            // Port 80 but the wrong size: not a heartbeat.
            Bytes body(rng() % 20);
            if (body.size() == kHeartbeatSize) body.push_back(0);
            process_packet(s, build_gtp_frame(uplink(ue(2), ue(3), Teid{1}, kProtoTcp, {40000, 80}), body), 1);
        } else if (kind == 2) {
            process_packet(s, initial_ue_frame(UeId{static_cast<std::uint32_t>(rng())}), 1);
        } else {
            Bytes noise(rng() % 80);
            for (auto& b : noise) b = static_cast<std::uint8_t>(rng());
            process_packet(s, noise, static_cast<Port>(rng() % 3 + 1));
        }
    }
    CHECK(s.http_sensor == std::map<std::uint16_t, std::uint64_t>(sent.begin(), sent.end()));
}

TEST_CASE("process_packet is total over noise") {
    std::mt19937_64 rng(13);
    const std::vector<Bytes> seeds{heartbeat_frame(1), initial_ue_frame(UeId{2}),
                                   ucp_frame(1, Opcode::Path, SwitchPath{2, {2}}),
                                   ucp_frame(1, Opcode::AddMonitoringRule, MonitorRule{})};
    SwitchState s = two_cell_switch();
    for (int i = 0; i < 20000; ++i) {
        Bytes f;
        if (i % 2) {
            f.resize(rng() % 120);
            for (auto& b : f) b = static_cast<std::uint8_t>(rng());
        } else {
            f = seeds[rng() % seeds.size()];
            for (int k = 0; k < 3; ++k) f[rng() % f.size()] = static_cast<std::uint8_t>(rng());
            f.resize(rng() % (f.size() + 1));
        }
        const auto v = process_packet(s, f, static_cast<Port>(rng() % 10));
        CHECK(v.index() < std::variant_size_v<PipelineVerdict>);
    }
}

TEST_CASE("switch state survives a JSON round trip") {
    SwitchState s = two_cell_switch();
    s.connect_switch(4, 20);
    s.nexthop[7] = 4;
    s.teids[Teid{99}] = SwitchId{7};
    s.security_mode = SecurityMode::Whitelist;
    s.in.ipv4_wlist.insert(addr(10, 0, 0, 0), 8, 3);
    s.out.udp_blist.insert(53);
    MonitorRule r;
    r.dst = Prefix{addr(10, 45, 0, 0), 16};
    r.protocol = kProtoTcp;
    s.monitor.push_back({r, 12});
    s.monitor.push_back({MonitorRule{}, 0});
    process_packet(s, heartbeat_frame(3), 1);
    process_packet(s, initial_ue_frame(UeId{5}), 1);

    const auto text = dump_state(s);
    CHECK(load_state(text) == s);
    CHECK_THROWS(load_state("{}"));

    std::ostringstream csv;
    write_counters_csv(csv, s);
    CHECK(csv.str().rfind("switch_id,counter_name,value\n", 0) == 0);
    CHECK(csv.str().find("1,monitor_rule_0,12\n") != std::string::npos);
    CHECK(csv.str().find("1,ue_ids,1\n") != std::string::npos);
}
