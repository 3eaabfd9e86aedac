#pragma once

#include <iosfwd>

namespace bfa::cli {

// Exit codes: 0 ok, 1 an --assert check failed, 2 usage/parse/domain error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bfa::cli
