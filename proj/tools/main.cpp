#include <iostream>
#include <string>
#include <vector>

#include "cqcap/commands.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return cqcap::run_command(std::move(args), std::cout, std::cerr);
}
