#ifndef GASNET_CLI_H_
#define GASNET_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "gasnet/network.h"

namespace gasnet {

enum ExitCode : int { kExitOk = 0, kExitInput = 1, kExitInternal = 2 };

// Resolves an edge by name, then by numeric id, then as "FROM->TO".
EdgeIndex resolve_edge(const Network& net, const std::string& selector);
// Resolves a node by name, then by numeric id.
NodeIndex resolve_node(const Network& net, const std::string& selector);

// Entry point behind the `gasnet` binary. `args` excludes the program name.
// Results go to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gasnet

#endif  // GASNET_CLI_H_
