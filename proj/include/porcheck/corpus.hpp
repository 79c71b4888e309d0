#pragma once

#include <map>
#include <string>

namespace porcheck {

// The shipped corpus/*.por files, keyed by file name, compiled into the binary.
const std::map<std::string, std::string>& embedded_corpus();

}  // namespace porcheck
