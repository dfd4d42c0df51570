#include <iostream>

#include "kbdx/cli.hpp"

int main(int argc, char** argv) { return kbdx::runCli(argc, argv, std::cin, std::cout, std::cerr); }
