#include <iostream>

#include "rie/cli.hpp"

int main(int argc, char** argv) { return rie::cli::run(argc, argv, std::cout, std::cerr); }
