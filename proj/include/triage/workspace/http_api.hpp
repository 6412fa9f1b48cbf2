#pragma once

#include <memory>
#include <string>

#include "triage/core/error.hpp"
#include "triage/workspace/workspace.hpp"

namespace triage::workspace {

// HTTP status for an error code: 400 malformed request, 404 unknown entity,
// 409 state conflict, 422 semantically invalid.
int http_status(ErrorCode code);

// JSON API over one workspace. Reads run concurrently on the server's
// thread pool; writes serialize inside the workspace.
class ApiServer {
 public:
  explicit ApiServer(Workspace& ws);
  ~ApiServer();

  // Port 0 picks a free port. Returns the bound port, or -1.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  bool listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace triage::workspace
