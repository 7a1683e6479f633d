#pragma once

#include <iosfwd>

namespace radcap::cli {

// Exit codes: 0 ok, 2 configuration or parameter error, 3 numeric failure, 4 gallery check failed.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace radcap::cli
