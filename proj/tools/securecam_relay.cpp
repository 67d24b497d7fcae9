#include <iostream>

#include "securecam/viewer_relay.hpp"

int main(int argc, char** argv) {
  return securecam::run_relay_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
