#include <iostream>

#include "galois/cli.hpp"

int main(int argc, char** argv) { return galois::cli::run(argc, argv, std::cout, std::cerr); }
