#pragma once

#include <map>
#include <memory>
#include <string>

#include "dexhand/actuation.hpp"
#include "dexhand/gestures.hpp"
#include "dexhand/hand_model.hpp"

namespace httplib {
class Server;
}

namespace dexhand {

struct ApiRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string body;  // JSON
};

/// Read-only HTTP/JSON facade over the library. All state is fixed at construction; handle()
/// is const and safe to call from concurrent request threads.
class Service {
 public:
  /// `spec_document` is the raw text the spec was loaded from; /api/hand-spec serves it verbatim.
  Service(HandSpec spec, std::string spec_document, GestureSet gestures, CouplingConfig coupling);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Routes one request. Errors come back as {code, message, details} with a 4xx status.
  ApiResponse handle(const ApiRequest& request) const;

  /// Binds the listener; port 0 picks a free port. Returns the bound port, or -1 on failure.
  int bind(const std::string& host, int port);
  /// Serves until stop(). Call after bind().
  void run();
  void stop();

 private:
  ApiResponse get_gestures(const ApiRequest& req) const;
  ApiResponse get_gesture(const std::string& id) const;
  ApiResponse post_interpolate(const ApiRequest& req) const;
  ApiResponse post_compile(const ApiRequest& req) const;
  ApiResponse post_fk(const ApiRequest& req) const;

  HandSpec spec_;
  std::string spec_document_;
  GestureSet gestures_;
  CouplingConfig coupling_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace dexhand
