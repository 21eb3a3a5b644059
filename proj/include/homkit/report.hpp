#pragma once

#include "homkit/complex.hpp"

#include <string>
#include <vector>

namespace hk {

/// Named pass/fail results of a verification run.
struct Report {
    struct Item {
        std::string name;
        bool ok = true;
        std::string detail;
    };
    std::vector<Item> items;

    void add(std::string name, bool ok, std::string detail = {}) {
        items.push_back({std::move(name), ok, std::move(detail)});
    }
    void add(std::string name, const Check& c) { add(std::move(name), c.ok, c.ok ? std::string() : c.describe()); }
    void merge(const Report& other, const std::string& prefix = {}) {
        for (const auto& it : other.items) items.push_back({prefix + it.name, it.ok, it.detail});
    }
    bool ok() const {
        for (const auto& it : items)
            if (!it.ok) return false;
        return true;
    }
    /// "name: detail" of the first failing item, empty if none.
    std::string first_failure() const {
        for (const auto& it : items)
            if (!it.ok) return it.detail.empty() ? it.name : it.name + ": " + it.detail;
        return {};
    }
};

} // namespace hk
