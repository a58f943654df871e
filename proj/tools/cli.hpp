#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tilt::cli {

// Runs one command line. Exit status 0 on success, 1 for domain errors and
// 2 for usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tilt::cli
