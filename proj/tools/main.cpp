#include <iostream>

#include "fas/cli.hpp"

int main(int argc, char** argv) { return fas::cli::run(argc, argv, std::cout, std::cerr); }
