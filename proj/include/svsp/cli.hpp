// The `svsp` command line.
//
// Exit status: 0 success or consistent; 1 findings (check errors, failed
// script directives, refused edits); 2 usage or syntax error; 3 I/O failure.
// Payloads go to `out`; messages about the tool itself go to `err`.

#pragma once

#include <iosfwd>

namespace svsp {

enum ExitStatus : int { kExitOk = 0, kExitFindings = 1, kExitUsage = 2, kExitIo = 3 };

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace svsp
