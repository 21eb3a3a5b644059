#include "homkit/acceptance.hpp"

#include <cstring>
#include <iostream>

int main(int argc, char** argv) {
    hk::accept::Config cfg;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--slow") == 0) cfg.slow = true;
    bool all = true;
    hk::accept::run_acceptance(cfg, [&](const hk::accept::Row& r) {
        std::cout << hk::accept::format_row(r) << std::endl;
        all = all && r.ok;
    });
    return all ? 0 : 1;
}
