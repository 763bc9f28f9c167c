#pragma once

#include <httplib.h>
#include <sys/socket.h>

namespace subsse {

// httplib defaults to SO_REUSEPORT on Linux, which lets a second process
// bind the same port without error. Keep SO_REUSEADDR only.
inline void use_exclusive_port(httplib::Server& server) {
  server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
}

}  // namespace subsse
