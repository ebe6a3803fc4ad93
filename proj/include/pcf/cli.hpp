#pragma once

namespace pcf::cli {

int run(int argc, char** argv);

inline int run(int argc, char** argv) {
    (void)argc;
    (void)argv;
    return 2;
}

} // namespace pcf::cli
