#include "spinrecon/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return spinrecon::cli::run(argc, argv, std::cout, std::cerr); }
