#include <iostream>

#include "biohybrid/cli.hpp"

int main(int argc, char** argv)
{
    return biohybrid::cli_dispatch(argc, argv, std::cout, std::cerr);
}
