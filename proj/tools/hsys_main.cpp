#include <iostream>

#include "hsys/cli.hpp"

int main(int argc, char** argv) { return hsys::cli::run(argc, argv, std::cout, std::cerr); }
