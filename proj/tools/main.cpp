#include "ndas/io.hpp"

int main(int argc, char** argv) { return ndas::run_cli(argc, argv); }
