#pragma once

#include <stdexcept>
#include <string>

namespace lesys {

// Every failure carries a short machine-readable kind ("regime", "no-bracket", ...)
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

inline bool is_config_error(const Error& e)
{
    return e.kind() == "regime" || e.kind() == "config" || e.kind() == "divergent";
}

}  // namespace lesys
