#pragma once

#include <iosfwd>

namespace sepmix::cli {

// Exit codes: 0 success, 1 tolerance failure, 2 usage error, 3 numeric error.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace sepmix::cli
