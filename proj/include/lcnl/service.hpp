#pragma once

#include <memory>
#include <string>

#include "lcnl/translator.hpp"

namespace lcnl {

/// HTTP front end over one shared Translator:
///   GET /v1/health, GET /v1/languages, POST /v1/translate, POST /v1/parse
class Service {
 public:
  explicit Service(const Translator& translator);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds to `port` (0 picks a free one) and returns the bound port, or -1.
  int bind(const std::string& host, int port);
  /// Blocks serving requests until stop().
  bool listen_after_bind();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace lcnl
