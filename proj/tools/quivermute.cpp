#include "quivermute/cli.hpp"

int main(int argc, char** argv) { return qm::run(argc, argv); }
