#include "jostfit/pipeline.hpp"

int main(int argc, char** argv) { return jostfit::run_cli(argc, argv); }
