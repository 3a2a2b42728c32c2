// tubekit - point tube pretext targets for point cloud videos

#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);
  return tubekit::cli::run(argc, argv, std::cin, std::cout, std::cerr);
}
