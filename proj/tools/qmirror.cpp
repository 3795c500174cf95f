#include "qmirror/cli.hpp"

int main(int argc, char** argv) { return qmirror::cli_main(argc, argv); }
