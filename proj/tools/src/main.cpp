#include "qspectra_cli/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return qspectra::cli::run(argc, argv, std::cout, std::cerr); }
