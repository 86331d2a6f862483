#include <iostream>

#include "bosecorr/cli.hpp"

int main(int argc, char** argv) { return bosecorr::cli::run(argc, argv, std::cout, std::cerr); }
