#include <iostream>

#include "rtbp/cli.hpp"

int main(int argc, char** argv) {
    return rtbp::cli::run(argc, argv, std::cout, std::cerr);
}
