#include <iostream>
#include <string>
#include <vector>

#include "ergolab/cli/run.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return ergolab::cli::run(args, std::cout, std::cerr);
}
