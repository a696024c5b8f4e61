// Error type carrying a stable machine-readable name alongside the message.
// The CLI prints the name on the diagnostic stream; tests match on it.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wishprod {

class Error : public std::runtime_error {
public:
    Error(std::string_view name, const std::string& message)
        : std::runtime_error(std::string(name) + ": " + message),
          name_(name) {}

    // Stable identifier, e.g. "NotSymmetric", "DowndateNotPSD".
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

[[noreturn]] inline void fail(std::string_view name, const std::string& message) {
    throw Error(name, message);
}

} // namespace wishprod
