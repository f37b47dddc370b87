#include <iostream>

#include "subspectra/cli.hpp"

int main(int argc, char** argv) { return subspectra::run_cli(argc, argv, std::cout, std::cerr); }
