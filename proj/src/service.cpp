#include "lcnl/service.hpp"

#include "httplib.h"
#include "lcnl/api.hpp"

namespace lcnl {

struct Service::Impl {
  const Translator& translator;
  httplib::Server server;
  explicit Impl(const Translator& t) : translator(t) {}
};

namespace {

constexpr const char* kJson = "application/json; charset=utf-8";

void reply(httplib::Response& res, const ApiResponse& r) {
  res.status = r.status;
  res.set_content(r.body, kJson);
}

}  // namespace

Service::Service(const Translator& translator) : impl_(std::make_unique<Impl>(translator)) {
  auto& srv = impl_->server;
  const Translator& t = impl_->translator;
  srv.Get("/v1/health", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"status":"ok"})", kJson);
  });
  srv.Get("/v1/languages", [&t](const httplib::Request&, httplib::Response& res) {
    res.set_content(languages_json(t), kJson);
  });
  srv.Post("/v1/translate", [&t](const httplib::Request& req, httplib::Response& res) {
    reply(res, handle_translate(t, req.body));
  });
  srv.Post("/v1/parse", [&t](const httplib::Request& req, httplib::Response& res) {
    reply(res, handle_parse(t, req.body));
  });
  srv.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string msg = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      msg = e.what();
    } catch (...) {
    }
    res.status = 500;
    res.set_content(error_json(msg), kJson);
  });
  srv.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) res.set_content(error_json("not found"), kJson);
  });
}

Service::~Service() { stop(); }

int Service::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool Service::listen_after_bind() { return impl_->server.listen_after_bind(); }

void Service::stop() { impl_->server.stop(); }

}  // namespace lcnl
