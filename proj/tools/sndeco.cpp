#include "sndeco/cli/app.hpp"

int main(int argc, char** argv) { return sndeco::cli::run(argc, argv); }
