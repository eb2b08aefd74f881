#include "qcl/harness.hpp"

int main(int argc, char** argv) { return qcl::run_cli(argc, argv); }
