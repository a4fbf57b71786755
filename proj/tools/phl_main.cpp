#include <cstdio>
#include <string>
#include <vector>

#include "phl/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> tokens(argv + 1, argv + argc);
    phl::cli::CommandResult res = phl::cli::run(tokens);
    std::fputs(res.payload.c_str(), stdout);
    std::fputc('\n', stdout);
    return res.exit_code;
}
