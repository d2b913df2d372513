#include <iostream>

#include "qsearch/cli.hpp"

int main(int argc, char** argv) { return qsearch::cli::cmd_dispatch(argc, argv, std::cout, std::cerr); }
