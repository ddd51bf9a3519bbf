#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cellgrid/controller/switch_graph.hpp"
#include "cellgrid/wire/ucp.hpp"

namespace cellgrid::controller {

enum class UpdateStatus { Pending, Acked };

class NotAReply : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class Controller {
public:
    // Recomputes every path and returns one Path message per (switch, destination) whose
    // path changed, addressed to that switch. Unreachable pairs get no message.
    std::vector<wire::UcpMessage> on_topology_change(const SwitchGraph& graph);

    // Logs a reply; 0xF2 marks the (sender, destination) update acked. Throws NotAReply.
    void handle_reply(const wire::UcpMessage& msg);

    const SwitchGraph& graph() const { return graph_; }
    const PathMap& paths() const { return paths_; }
    const std::set<std::pair<SwitchId, SwitchId>>& unreachable() const { return unreachable_; }
    const std::map<std::pair<SwitchId, SwitchId>, UpdateStatus>& updates() const { return updates_; }
    const std::vector<wire::UcpMessage>& reply_log() const { return reply_log_; }
    std::size_t pending_count() const;

private:
    SwitchGraph graph_;
    PathMap paths_;
    std::set<std::pair<SwitchId, SwitchId>> unreachable_;
    std::map<std::pair<SwitchId, SwitchId>, UpdateStatus> updates_;
    std::vector<wire::UcpMessage> reply_log_;
};

wire::UcpMessage path_message(SwitchId to, SwitchId destination, const std::vector<SwitchId>& hops);

}  // namespace cellgrid::controller
