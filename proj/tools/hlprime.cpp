#include <iostream>
#include <string>
#include <vector>

#include "hlprime/harness.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return hlprime::run_cli(args, std::cout, std::cerr);
}
