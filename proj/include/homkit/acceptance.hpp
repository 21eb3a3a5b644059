#pragma once

#include <functional>
#include <string>
#include <vector>

namespace hk::accept {

struct Config {
    bool slow = false; // currently changes nothing: every instance is fast enough
    unsigned seed = 0;
};

struct Row {
    int id = 0;
    std::string name;
    bool ok = false;
    std::string detail; // first failure, or a short summary
    double seconds = 0;
};

/// The thirteen acceptance criteria, in order. `on_row` sees each row as it finishes.
std::vector<Row> run_acceptance(const Config& cfg, const std::function<void(const Row&)>& on_row = {});

std::string format_row(const Row& r);

} // namespace hk::accept
