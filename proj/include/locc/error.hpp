#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace locc {

// Domain error carrying a module-qualified code such as "schmidt.ZeroSum".
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

}  // namespace locc
