#pragma once

#include <string>
#include <utility>
#include <vector>

namespace polyfun {

/* outcome of a single verification, with key/value evidence */
struct CheckReport {
    std::string check;
    bool pass = false;
    std::vector<std::pair<std::string, std::string>> witness;

    void note(std::string k, std::string v) { witness.emplace_back(std::move(k), std::move(v)); }
};

}  // namespace polyfun
