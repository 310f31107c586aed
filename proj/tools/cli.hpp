#pragma once

#include <iosfwd>

namespace cweno::cli {

// Full command-line front end; returns the process exit status (0 on success,
// 1 on any usage or solver error).  Output streams are injectable for tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cweno::cli
