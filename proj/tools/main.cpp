#include <exception>
#include <iostream>

#include "clpwan/cli.hpp"

int main(int argc, char** argv) {
    try {
        return clpwan::cli_main(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "fatal: " << e.what() << "\n";
        return 2;
    }
}
