#include "permsolve/cli.hpp"

int main(int argc, char** argv) { return permsolve::dispatch(argc, argv); }
