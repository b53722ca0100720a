// qbm.cpp — command-line entry point; see `qbm --help`.

#include "qbm/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return qbm::cli::run(argc, argv, std::cout, std::cerr); }
