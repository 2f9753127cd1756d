#include <iostream>
#include <string>
#include <vector>

#include "dyspec/runner.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return dyspec::run_cli(args, std::cout, std::cerr);
}
