#include <iostream>

#include "sadik/cli.hpp"

int main(int argc, char** argv) { return sadik::run_cli(argc, argv, std::cout, std::cerr); }
