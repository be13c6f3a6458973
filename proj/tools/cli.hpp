#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tripler::cli {

// Exit codes of run().
enum Exit : int { ok = 0, config_error = 1, numerical_error = 2, validity_error = 3 };

// args excludes the program name. Nothing is written under --out unless the
// computation succeeds.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tripler::cli
