#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fgld {

enum class CheckStatus { Pass, Fail, HorizonFlagged };

constexpr std::string_view to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        case CheckStatus::HorizonFlagged: return "horizon-flagged";
    }
    return "fail";
}

/// One verified statement. Failures are data: the defect carries the
/// offending residue rendered in canonical form.
struct Check {
    std::string name;
    CheckStatus status = CheckStatus::Pass;
    std::string detail;
    std::optional<std::string> defect;

    bool passed() const { return status != CheckStatus::Fail; }
};

struct CheckList {
    std::vector<Check> checks;

    void add(std::string name, bool ok, std::string detail = {}, std::optional<std::string> defect = std::nullopt) {
        checks.push_back({std::move(name), ok ? CheckStatus::Pass : CheckStatus::Fail, std::move(detail),
                          ok ? std::nullopt : std::move(defect)});
    }
    void append(const CheckList& other) { checks.insert(checks.end(), other.checks.begin(), other.checks.end()); }

    bool all_passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed(); });
    }
    const Check* find(std::string_view name) const {
        for (const auto& c : checks)
            if (c.name == name) return &c;
        return nullptr;
    }
};

}  // namespace fgld
