#include "qmirror/log.hpp"

#include <cstdlib>
#include <iostream>

namespace qmirror {

int log_level() {
    static const int lvl = [] {
        const char* e = std::getenv("QMIRROR_LOG");
        return e ? std::atoi(e) : 0;
    }();
    return lvl;
}

void log_msg(int level, const std::string& msg) {
    if (level <= log_level()) std::cerr << "[qmirror] " << msg << '\n';
}

}  // namespace qmirror
