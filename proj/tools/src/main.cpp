#include <iostream>

#include "squid_horizon_cli/cli.hpp"

int main(int argc, char** argv) { return squid_horizon::cli::run(argc, argv, std::cout, std::cerr); }
