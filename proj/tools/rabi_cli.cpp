#include <iostream>

#include "rabi/cli.hpp"

int main(int argc, char** argv) {
    return rabi::cli::run_cli(argc, argv, std::cout, std::cerr);
}
