#pragma once

// Command-line front end shared by the `cliquefactor` binary and the tests.
//
// Exit codes: 0 positive verdict, 1 negative verdict (infeasible, no factor,
// pipeline failure), 2 usage or input errors.

#include <ostream>

namespace cliquefactor::cli {

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cliquefactor::cli
