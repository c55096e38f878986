#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return lidskii::cli::run(argc, argv, std::cerr); }
