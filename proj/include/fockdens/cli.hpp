#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fockdens/algebra.hpp"

namespace fockdens {

/// Exit codes: 0 success, 2 validation/usage error, 3 numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "1,2:0.5" -> (1, 2 + 0.5i): comma-separated components, each "re" or "re:im".
cvec parse_complex_list(const std::string& text);
std::vector<double> parse_real_list(const std::string& text);

}  // namespace fockdens
