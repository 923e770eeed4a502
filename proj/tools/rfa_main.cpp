#include "rfa/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return rfa::run_cli(argc, argv, std::cout, std::cerr);
}
