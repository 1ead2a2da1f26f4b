#include <iostream>

#include "chengap/cli.hpp"

int main(int argc, char** argv) { return chengap::cli::run(argc, argv, std::cout, std::cerr); }
