#include "lcnl/api.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

namespace lcnl {

using ojson = nlohmann::ordered_json;

namespace {

double rounded(double cost) { return std::round(cost * 1e6) / 1e6; }

ojson spans_json(const std::vector<ConfidenceSpan>& spans) {
  auto out = ojson::array();
  for (const auto& s : spans) out.push_back({{"start", s.start}, {"end", s.end}, {"layer", to_string(s.layer)}});
  return out;
}

struct BadRequest {
  int status;
  std::string message;
};

struct Request {
  std::string text;
  std::size_t k = 5;
  ojson body;
};

Request read_request(const std::string& body) {
  Request r;
  try {
    r.body = ojson::parse(body);
  } catch (const ojson::exception&) {
    throw BadRequest{400, "malformed JSON body"};
  }
  if (!r.body.is_object()) throw BadRequest{400, "body must be a JSON object"};
  if (!r.body.contains("text") || !r.body["text"].is_string()) throw BadRequest{400, "missing string field 'text'"};
  r.text = r.body["text"].get<std::string>();
  if (utf8_length(r.text) > kMaxInputChars) throw BadRequest{413, "input exceeds 10000 characters"};
  if (r.body.contains("k")) {
    const auto& k = r.body["k"];
    if (!k.is_number_integer() || k.get<long long>() < 1 || k.get<long long>() > kMaxK) {
      throw BadRequest{400, "'k' must be an integer between 1 and 100"};
    }
    r.k = k.get<std::size_t>();
  }
  return r;
}

std::string language_field(const Request& r, const Translator& t, const char* key) {
  if (!r.body.contains(key) || !r.body[key].is_string()) {
    throw BadRequest{400, std::string("missing string field '") + key + "'"};
  }
  auto lang = r.body[key].get<std::string>();
  auto langs = t.languages();
  if (std::find(langs.begin(), langs.end(), lang) == langs.end()) throw BadRequest{400, "unknown language: " + lang};
  return lang;
}

template <class F>
ApiResponse guarded(F&& f) {
  try {
    return {200, f()};
  } catch (const BadRequest& b) {
    return {b.status, error_json(b.message)};
  } catch (const Error& e) {
    return {e.kind() == ErrorKind::NoParse ? 422 : 400, error_json(e.what())};
  }
}

}  // namespace

std::string translation_json(const TranslationResult& r, bool with_trees) {
  ojson j;
  j["source"] = r.source;
  j["target"] = r.target;
  j["tree"] = r.tree;
  j["cost"] = rounded(r.cost);
  j["spans"] = spans_json(r.spans);
  j["sourceSpans"] = spans_json(r.source_spans);
  auto bounds = ojson::array();
  for (const auto& b : r.chunk_boundaries) bounds.push_back({b.start, b.end});
  j["chunkBoundaries"] = bounds;
  auto alts = ojson::array();
  for (const auto& a : r.alternatives) {
    ojson x{{"target", a.target}, {"cost", rounded(a.cost)}};
    if (with_trees) x["tree"] = a.tree;
    alts.push_back(std::move(x));
  }
  j["alternatives"] = alts;
  return j.dump();
}

std::string parse_json(const ParseResult& r) {
  ojson j;
  auto trees = ojson::array();
  for (const auto& t : r.trees) {
    trees.push_back({{"tree", serialize_tree(t.tree)}, {"cost", rounded(t.cost)}});
  }
  j["trees"] = trees;
  j["stats"] = {{"goals", r.stats.goals}, {"edges", r.stats.edges}, {"pops", r.stats.pops}};
  return j.dump();
}

std::string languages_json(const Translator& t) {
  ojson j;
  j["languages"] = t.languages();
  return j.dump();
}

std::string error_json(const std::string& message) {
  ojson j;
  j["error"] = message;
  return j.dump();
}

ApiResponse handle_translate(const Translator& t, const std::string& body) {
  return guarded([&] {
    auto req = read_request(body);
    auto from = language_field(req, t, "from");
    auto to = language_field(req, t, "to");
    bool trees = req.body.value("trees", false);
    return translation_json(t.translate(req.text, from, to, req.k), trees);
  });
}

ApiResponse handle_parse(const Translator& t, const std::string& body) {
  return guarded([&] {
    auto req = read_request(body);
    auto lang = language_field(req, t, "lang");
    return parse_json(t.parse(req.text, lang, req.k));
  });
}

}  // namespace lcnl
