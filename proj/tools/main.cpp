#include "dao/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return dao::cli::run(argc, argv, std::cout, std::cerr); }
