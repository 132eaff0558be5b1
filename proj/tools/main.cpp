#include "delaysync/cli.hpp"

int main(int argc, char** argv) { return delaysync::run_cli(argc, argv); }
