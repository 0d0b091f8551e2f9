#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

namespace gammalab {

/// One verified identity: passes iff residual <= tolerance (NaN never passes).
struct Check {
    std::string name;
    std::string anchor;  // the identity being checked, written out
    double residual = 0;
    double tolerance = 0;
    bool pass = false;
};

struct Report {
    std::string command;
    std::vector<Check> checks;
    std::vector<std::string> notes;

    Check& add(std::string name, std::string anchor, double residual, double tolerance) {
        checks.push_back({std::move(name), std::move(anchor), residual, tolerance, residual <= tolerance});
        return checks.back();
    }
    void merge(const Report& other, const std::string& prefix = {}) {
        for (auto c : other.checks) {
            if (!prefix.empty()) c.name = prefix + c.name;
            checks.push_back(std::move(c));
        }
        notes.insert(notes.end(), other.notes.begin(), other.notes.end());
    }
    bool pass() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
    }
    const Check* find(const std::string& name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
    double maxResidual() const {
        double m = 0;
        for (const auto& c : checks) m = std::max(m, c.residual);
        return m;
    }
};

} // namespace gammalab
