#include <iostream>

#include "semcache/cli.hpp"

int main(int argc, char** argv) {
  return semcache::cli::run(argc, argv, std::cout, std::cerr);
}
