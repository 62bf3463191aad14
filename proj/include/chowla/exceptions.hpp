#pragma once

#include <stdexcept>
#include <string>

namespace chowla {

// An exact identity or theorem-level assertion failed. Distinguished from
// ordinary usage/resource errors so the CLI can map it to exit status 2.
struct identity_violation : std::logic_error {
    explicit identity_violation(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace chowla
