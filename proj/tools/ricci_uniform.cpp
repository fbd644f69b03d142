#include <iostream>

#include "ricci/cli.hpp"

int main(int argc, char** argv) { return ricci::cli::run(argc, argv, std::cout, std::cerr); }
