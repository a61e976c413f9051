#include <string>
#include <vector>

#include "badlab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return badlab::cli::run(args);
}
