#pragma once

#include <httplib.h>

namespace securecam::detail {

// httplib's default enables SO_REUSEPORT, which lets a second server bind an
// occupied port and silently split connections with the first.
inline void exclusive_bind_options(socket_t sock) {
  int yes = 1;
  setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
}

}  // namespace securecam::detail
