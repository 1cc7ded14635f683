#include <string>
#include <vector>

#include "toporad/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return toporad::run_cli(args);
}
