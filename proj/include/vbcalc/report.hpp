#pragma once

#include <string>
#include <utility>
#include <vector>

namespace vbcalc {

/// Outcome of one structural check. A failure always carries a witness
/// (the offending frame tuple and residual, printed in canonical form).
struct Check {
    std::string name;
    bool passed = true;
    std::string witness;

    static Check pass(std::string name) { return {std::move(name), true, ""}; }
    static Check fail(std::string name, std::string witness) {
        return {std::move(name), false, std::move(witness)};
    }
};

/// A set of named checks; all_passed() drives exit codes and preconditions.
class Report {
public:
    void add(Check c) { checks_.push_back(std::move(c)); }
    void add_pass(const std::string& name) { add(Check::pass(name)); }
    void add_fail(const std::string& name, const std::string& witness) {
        add(Check::fail(name, witness));
    }
    void merge(const Report& other) {
        for (const auto& c : other.checks_) checks_.push_back(c);
    }

    bool all_passed() const {
        for (const auto& c : checks_)
            if (!c.passed) return false;
        return true;
    }

    const std::vector<Check>& checks() const { return checks_; }

    /// First failing check, or nullptr.
    const Check* first_failure() const {
        for (const auto& c : checks_)
            if (!c.passed) return &c;
        return nullptr;
    }

private:
    std::vector<Check> checks_;
};

}  // namespace vbcalc
