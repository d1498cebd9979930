// SPDX-License-Identifier: MIT
#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return tucker::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
