#include <iostream>
#include <string>
#include <vector>

#include "wigner/cli.hpp"

int main(int argc, char** argv) {
    return wigner::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout,
                            std::cerr);
}
