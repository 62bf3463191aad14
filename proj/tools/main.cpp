#include <iostream>
#include <string>
#include <vector>

#include "chowla/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return chowla::cli::run(std::move(args), std::cout, std::cerr);
}
