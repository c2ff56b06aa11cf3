#include "uniformize/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return uniformize::cli_dispatch(argc, argv, std::cout, std::cerr);
}
