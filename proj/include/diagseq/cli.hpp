#pragma once

#include <iosfwd>

namespace diagseq {

/// Entry point of the `diagseq` tool: subcommands gen, session, bench and
/// report. Returns 0 on success, 1 on usage errors, 2 on runtime errors.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace diagseq
