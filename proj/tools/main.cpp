#include "gcn/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return gcn::cli::run(argc, argv, std::cout, std::cerr);
}
