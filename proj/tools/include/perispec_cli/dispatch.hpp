// SPDX-License-Identifier: Apache-2.0

#ifndef PERISPEC_CLI_DISPATCH_HPP
#define PERISPEC_CLI_DISPATCH_HPP

#include <ostream>
#include <string>
#include <vector>

namespace perispec_cli {

/// Runs one CLI invocation.  Returns the process exit code:
///   0  success
///   2  input error (bad flags, malformed or out-of-domain input)
///   3  numeric failure (diagnostic JSON on err)
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace perispec_cli

#endif
