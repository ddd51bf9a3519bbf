#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
    cellgrid::cli::configure_logging();
    return cellgrid::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
