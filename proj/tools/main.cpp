#include <iostream>

#include "ddwave/cli.hpp"

int main(int argc, char** argv)
{
    return ddw::cli::dispatch(argc, argv, std::cout, std::cerr);
}
