#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace cellgrid::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view text);

struct ManifestInput {
    std::string subcommand;
    std::optional<std::string> config_path;
    std::uint64_t seed = 0;
    std::string output_dir;
    nlohmann::json config;  // effective config; "jobs" is left out of the hash
    std::vector<std::string> outputs;
    std::optional<std::string> csv_schema;
};

nlohmann::json make_manifest(const ManifestInput& in);

// Sets the log level from CELLGRID_LOG (trace, debug, info, warn, error, off); default warn.
void configure_logging();

// Parses and runs one command line (args excludes the program name). Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cellgrid::cli
