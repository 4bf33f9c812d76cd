#include "srbath/cli.hpp"

int main(int argc, char** argv) { return srbath::cli::run(argc, argv); }
