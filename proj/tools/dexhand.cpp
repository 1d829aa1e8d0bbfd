#include <iostream>

#include "dexhand/cli.hpp"

int main(int argc, char** argv) { return dexhand::cli::run(argc, argv, std::cout, std::cerr); }
