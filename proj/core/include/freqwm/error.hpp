#pragma once

#include <stdexcept>
#include <string>

namespace freqwm {

// Domain errors: invalid inputs, malformed files, violated preconditions.
// The CLI maps these to exit code 2.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace freqwm
