#ifndef OWH_ERRORS_HPP
#define OWH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace owh {

// Invalid configuration or schema violation (CLI exit code 2).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace owh

#endif // OWH_ERRORS_HPP
