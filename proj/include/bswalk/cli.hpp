#ifndef BSWALK_CLI_HPP_
#define BSWALK_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace bswalk {

  // Runs one command line (without the program name) and returns the exit
  // status: 0 on success, 1 for an invalid graph under validate-graph, 2 for
  // parse or precondition failures, 3 for I/O errors.  Failures print one
  // "Kind: message" line on `err`.
  int run_cli(std::vector<std::string> const& args, std::ostream& out, std::ostream& err);

}  // namespace bswalk

#endif  // BSWALK_CLI_HPP_
