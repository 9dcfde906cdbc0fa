#pragma once

#include <string>

#include "lcnl/translator.hpp"

namespace lcnl {

inline constexpr int kMaxInputChars = 10000;
inline constexpr int kMaxK = 100;

/// JSON documents shared by the command-line tool and the HTTP service, so
/// both emit identical bytes for identical requests.
std::string translation_json(const TranslationResult& r, bool with_trees = false);
std::string parse_json(const ParseResult& r);
std::string languages_json(const Translator& t);
std::string error_json(const std::string& message);

struct ApiResponse {
  int status = 200;
  std::string body;
};

/// Request handlers independent of any transport.
ApiResponse handle_translate(const Translator& t, const std::string& body);
ApiResponse handle_parse(const Translator& t, const std::string& body);

}  // namespace lcnl
