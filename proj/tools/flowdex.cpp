#include <iostream>

#include "flowdex/cli.hpp"

int main(int argc, char** argv) { return flowdex::cli::run(argc, argv, std::cout, std::cerr); }
