#include "specdim/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return specdim::cli::run(argc, argv, std::cout, std::cerr); }
