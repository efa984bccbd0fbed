#include <iostream>
#include <string>
#include <vector>

#include "dfbopo/cli/commands.hpp"

int main(int argc, char **argv)
{
    const std::vector<std::string> args(argv + 1, argv + argc);
    return dfbopo::cli::run(args, std::cout, std::cerr);
}
