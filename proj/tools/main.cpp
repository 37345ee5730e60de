#include <sepmix/cli.hpp>

#include <iostream>

int main(int argc, char** argv) {
  return sepmix::cli::main(argc, argv, std::cout, std::cerr);
}
