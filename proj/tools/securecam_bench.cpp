#include <iostream>

#include "securecam/bench.hpp"

int main(int argc, char** argv) {
  return securecam::bench::run_bench_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
