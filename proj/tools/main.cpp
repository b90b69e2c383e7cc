#include <iostream>

#include "report.hpp"

int main(int argc, char** argv)
{
    return dm::cli::run(argc, argv, std::cout, std::cerr);
}
