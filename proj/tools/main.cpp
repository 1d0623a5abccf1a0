#include <iostream>

#include "decoy/cli.hpp"

int main(int argc, char** argv) {
    return decoy::cli::run(argc, argv, std::cout, std::cerr);
}
