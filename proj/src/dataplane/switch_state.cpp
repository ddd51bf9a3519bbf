#include "cellgrid/dataplane/switch_state.hpp"

namespace cellgrid::dataplane {

std::optional<SwitchId> SwitchState::neighbor_on(Port port) const {
    for (const auto& [id, p] : neighbor_ports) {
        if (p == port) return id;
    }
    return std::nullopt;
}

}  // namespace cellgrid::dataplane
