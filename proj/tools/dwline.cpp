#include <iostream>
#include <string>
#include <vector>

#include "dwline/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return dwline::cli::run_cli(args, std::cout, std::cerr);
}
