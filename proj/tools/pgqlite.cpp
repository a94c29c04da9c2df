#include <iostream>
#include <vector>

#include "pgqlite/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    return pgqlite::run_cli(args, std::cout, std::cerr);
}
