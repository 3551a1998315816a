#pragma once

#include <string>
#include <vector>

namespace flowdex {

/// Outcome of a verifier: accepted iff no violation was recorded.
struct Report {
    std::vector<std::string> violations;

    bool ok() const noexcept { return violations.empty(); }
    explicit operator bool() const noexcept { return ok(); }

    void fail(std::string message) { violations.push_back(std::move(message)); }
};

}  // namespace flowdex
