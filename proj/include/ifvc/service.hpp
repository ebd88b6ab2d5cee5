#pragma once

#include <string>

#include "ifvc/session.hpp"

namespace httplib {
class Server;
}

namespace ifvc {

/// Installs the JSON/PNG API for one session on `server`:
///   GET    /meta
///   GET    /frames/{l}/semantics
///   GET    /frames/{l}/mesh
///   GET    /frames/{l}/preview.png
///   POST   /edits            body: EditOp JSON
///   DELETE /edits/{k}
///   POST   /key              multipart: image (PNG), optional semantics (JSON)
///   POST   /export           returns the re-encoded .ifvc bytes
/// Errors are answered as {"error": kind, "message": text}. The session must
/// outlive the server.
void register_routes(httplib::Server& server, Session& session);

/// Blocks serving on host:port until the process is stopped.
void serve(Session& session, const std::string& host, int port);

}  // namespace ifvc
