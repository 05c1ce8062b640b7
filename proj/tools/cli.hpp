#pragma once

#include <ostream>

namespace regretlab {

/// Exit codes: 0 success, 1 a verify check failed, 2 usage or configuration
/// error, 3 a run raised an error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace regretlab
