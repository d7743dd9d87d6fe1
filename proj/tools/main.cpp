#include <iostream>

#include "hypermp/cli.hpp"

int main(int argc, char** argv) { return hypermp::cli::run(argc, argv, std::cout, std::cerr); }
