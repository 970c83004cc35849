#include <iostream>

#include "banditnav/cli.hpp"

int main(int argc, char** argv) { return banditnav::cli::run_cli(argc, argv, std::cout, std::cerr); }
