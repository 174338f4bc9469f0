#pragma once

#include <stdexcept>
#include <string>

namespace polyfun {

/* wrong setting for the requested computation (e.g. infinite homology where
 * finite groups are required) */
struct SettingError : std::runtime_error {
    explicit SettingError(const std::string& what) : std::runtime_error(what) {}
};

/* a computation would exceed the configured size bounds */
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace polyfun
