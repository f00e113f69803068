#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qm {

// Command-line driver. Exit status 0 on success, 1 on a domain error, 2 on a usage error;
// domain errors are written to `err` as one JSON object.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace qm
