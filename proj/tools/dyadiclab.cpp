#include "cli.hpp"

#include <iostream>

int main(int argc, char **argv)
{
    return dyadiclab::run(argc, argv, std::cout, std::cerr);
}
