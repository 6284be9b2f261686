#pragma once

#include <string>
#include <vector>

namespace snakes {

/// The CLI entry point. Exit codes: 0 success, 2 usage error (bad flags, law
/// strings, unwritable paths), 3 sampling failure (rejection budget).
int cli_main(const std::vector<std::string>& args);

} // namespace snakes
