#include "hmit/cli.hpp"

int main(int argc, char** argv) { return hmit::run_cli(argc, argv); }
