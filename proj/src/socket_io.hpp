#pragma once

#include <string>
#include <string_view>

// Thin POSIX TCP helpers shared by the server and the client.
namespace gridsim::net {

// Returns a connected socket fd, or -1.
int connect_to(const std::string& host, int port);

// Returns a listening socket fd bound to host:port (port 0 picks one), or -1.
int listen_on(const std::string& host, int port);

// The locally bound port of a socket.
int bound_port(int fd);

// Sends the whole buffer; false on any error.
bool send_all(int fd, std::string_view data);

}  // namespace gridsim::net
