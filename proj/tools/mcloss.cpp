#include "mcloss/cli.hpp"

int main(int argc, char** argv) { return mcloss::run_cli(argc, argv); }
