// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace palinverse::cli {

// Exit codes: 0 success, 2 domain failure, 1 internal error. Failures print a
// single-line JSON object on `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace palinverse::cli
