#include <clocale>
#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  std::setlocale(LC_ALL, "C");
  return rankmetrics::cli::run(argc, argv, std::cout, std::cerr);
}
