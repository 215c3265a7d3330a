#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace lesys {

struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<std::string> out_dir;
};

// Exit codes: 0 all checks pass, 1 a check failed, 2 configuration or regime error
int run_config(const nlohmann::json& cfg, const RunOverrides& ov, std::ostream& log);
int run_config_file(const std::string& path, const RunOverrides& ov, std::ostream& log);

// sha256 of the canonical effective configuration, first 16 hex digits
std::string config_hash(const nlohmann::json& effective);

}  // namespace lesys
