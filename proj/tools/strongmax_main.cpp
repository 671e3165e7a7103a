#include "strongmax/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return strongmax::cli::run(argc, argv, std::cout, std::cerr); }
