#include <vector>

#include "stencilfab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return stencilfab::run_cli(args);
}
