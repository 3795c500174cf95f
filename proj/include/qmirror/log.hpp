#pragma once

#include <string>

namespace qmirror {

// Verbosity from QMIRROR_LOG (0 silent .. 3 chatty); messages go to stderr.
int log_level();
void log_msg(int level, const std::string& msg);

}  // namespace qmirror
