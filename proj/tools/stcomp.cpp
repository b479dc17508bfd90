#include <iostream>

#include "stcomp/cli.hpp"

int main(int argc, char** argv) { return stcomp::cli::main(argc, argv, std::cout, std::cerr); }
