#include <csignal>
#include <iostream>
#include <variant>

#include "securecam/device_server.hpp"
#include "securecam/error.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  auto parsed = securecam::parse_device_cli(args, std::cout, std::cerr);
  if (const int* code = std::get_if<int>(&parsed)) return *code;

  // Block termination signals before any thread exists so only sigwait sees them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  try {
    securecam::DeviceServer server(std::get<securecam::DeviceOptions>(std::move(parsed)));
    server.start();
    std::cout << "securecam device listening on " << server.base_url() << std::endl;
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  } catch (const securecam::Error& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
  return 0;
}
