#include <iostream>

#include "bmf/cli.hpp"

int main(int argc, char** argv) { return bmf::cli::run(argc, argv, std::cout, std::cerr); }
