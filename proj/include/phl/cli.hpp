#pragma once

#include <string>
#include <vector>

namespace phl::cli {

struct CommandResult {
    int exit_code = 0;  // 0 success / 1 domain error / 2 resource error / 3 usage error
    std::string payload;  // one JSON document
};

CommandResult run(const std::vector<std::string>& argv);

}  // namespace phl::cli
