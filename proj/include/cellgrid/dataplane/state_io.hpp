#pragma once

#include <iosfwd>
#include <string>

#include "cellgrid/dataplane/switch_state.hpp"

namespace cellgrid::dataplane {

// Full switch state as a JSON document; load(dump(s)) == s.
std::string dump_state(const SwitchState& state, int indent = 2);
SwitchState load_state(const std::string& json);

// Rows of (switch_id, counter_name, value).
void write_counters_csv(std::ostream& out, const SwitchState& state, bool header = true);

}  // namespace cellgrid::dataplane
