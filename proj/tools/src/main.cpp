#include <iostream>

#include "noisynet/cli.hpp"

int main(int argc, char** argv) {
    return noisynet::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
