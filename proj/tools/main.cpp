#include <iostream>

#include "hurlab/cli.hpp"

int main(int argc, char** argv) { return hurlab::cli::run(argc, argv, std::cout, std::cerr); }
