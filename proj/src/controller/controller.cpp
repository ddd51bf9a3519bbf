#include "cellgrid/controller/controller.hpp"

#include <algorithm>

namespace cellgrid::controller {

using namespace cellgrid::wire;

UcpMessage path_message(SwitchId to, SwitchId destination, const std::vector<SwitchId>& hops) {
    return UcpMessage{to, make_cmi(Opcode::Path), SwitchPath{destination, hops}};
}

std::vector<UcpMessage> Controller::on_topology_change(const SwitchGraph& graph) {
    auto table = shortest_paths(graph);
    std::vector<UcpMessage> out;
    for (const auto& [pair, entry] : table.paths) {
        const auto [src, dst] = pair;
        if (src == dst) continue;
        auto old = paths_.find(pair);
        if (old != paths_.end() && old->second.hops == entry.hops) continue;
        out.push_back(path_message(src, dst, entry.hops));
        updates_[pair] = UpdateStatus::Pending;
    }
    for (const auto& pair : table.unreachable) updates_.erase(pair);
    graph_ = graph;
    paths_ = std::move(table.paths);
    unreachable_ = std::move(table.unreachable);
    return out;
}

void Controller::handle_reply(const UcpMessage& msg) {
    if (msg.cmi.op_type != static_cast<std::uint8_t>(OpType::Reply)) {
        throw NotAReply("not a reply: " + std::string(opcode_name(msg.cmi.opcode())));
    }
    reply_log_.push_back(msg);
    if (msg.cmi.opcode() != Opcode::NexthopUpdated) return;
    const auto* reply = std::get_if<wire::Reply>(&msg.payload);
    if (!reply) return;
    const auto* target = std::get_if<ReplyTarget>(&reply->data);
    if (!target) return;
    auto it = updates_.find({msg.switch_id, target->id});
    if (it != updates_.end()) it->second = UpdateStatus::Acked;
}

std::size_t Controller::pending_count() const {
    return static_cast<std::size_t>(std::count_if(updates_.begin(), updates_.end(), [](const auto& u) {
        return u.second == UpdateStatus::Pending;
    }));
}

}  // namespace cellgrid::controller
