#include "vofrac/app.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return vofrac::app::run(argc, argv, std::cout, std::cerr);
}
