#include <iostream>

#include "sffd/cli/app.hpp"

int main(int argc, char** argv) { return sffd::cli::run_app(argc, argv, std::cout, std::cerr); }
