#include "losch/commands.hpp"

int main(int argc, char** argv) { return losch::run_cli(argc, argv); }
