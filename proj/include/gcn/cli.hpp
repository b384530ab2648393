#pragma once

#include <iosfwd>

namespace gcn::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int {
    kOk = 0,
    kNegative = 1,        // composite / invalid certificate / monitor violation
    kProbablePrime = 2,   // certify: not proven, not refuted
    kMalformed = 3,       // verify: unreadable or ill-formed certificate
    kUsage = 64,
    kInternal = 70,
    kIoError = 74,
};

/// Parses argv and dispatches; never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gcn::cli
