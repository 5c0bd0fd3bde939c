#include <iostream>

#include "recoil_cli/app.hpp"

int main(int argc, char** argv) { return recoil::cli::run(argc, argv, std::cout, std::cerr); }
