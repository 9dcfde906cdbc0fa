#include "lcnl/pack.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "lcnl/grammar_lang.hpp"

namespace lcnl {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorKind::PackError, p.string(), "cannot read file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs `f`, prefixing every diagnostic location with the file name.
template <class F>
auto in_file(const fs::path& p, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    auto diags = e.diagnostics();
    for (auto& d : diags) d.where = p.filename().string() + (d.where.empty() ? "" : ": " + d.where);
    throw Error(std::move(diags));
  }
}

const json& need(const json& j, const char* key, const fs::path& manifest) {
  if (!j.contains(key)) throw Error(ErrorKind::PackError, manifest.filename().string(), std::string("missing key '") + key + "'");
  return j.at(key);
}

EmbeddingCosts read_costs(const json& j) {
  EmbeddingCosts c;
  if (!j.is_object()) return c;
  c.use_cnl = j.value("useCnl", c.use_cnl);
  c.use_host = j.value("useHost", c.use_host);
  c.per_chunk = j.value("perChunk", c.per_chunk);
  c.coercion = j.value("coercion", c.coercion);
  c.unknown_word = j.value("unknownWord", c.unknown_word);
  return c;
}

}  // namespace

std::vector<CorpusEntry> read_corpus(std::string_view text, const std::string& file) {
  std::vector<CorpusEntry> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cols;
    std::size_t pos = 0;
    while (true) {
      auto tab = line.find('\t', pos);
      cols.push_back(line.substr(pos, tab == std::string::npos ? std::string::npos : tab - pos));
      if (tab == std::string::npos) break;
      pos = tab + 1;
    }
    if (cols.size() < 2 || cols.size() > 4) {
      throw Error(ErrorKind::PackError, file + ":" + std::to_string(n), "expected 2 to 4 tab-separated columns");
    }
    CorpusEntry e{cols[0], cols[1], cols.size() > 2 ? cols[2] : "", std::nullopt, n};
    if (cols.size() == 4) e.target = cols[3];
    out.push_back(std::move(e));
  }
  return out;
}

GrammarPack load_pack(const fs::path& dir, const PackOptions& options) {
  auto manifest_path = dir / "manifest.json";
  if (!fs::exists(manifest_path)) {
    throw Error(ErrorKind::PackError, manifest_path.string(), "manifest.json not found");
  }
  json m;
  try {
    m = json::parse(read_file(manifest_path));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::PackError, "manifest.json", e.what());
  }

  GrammarPack pack;
  pack.root = dir;
  pack.name = m.value("name", dir.filename().string());

  try {
    const auto& abs = need(m, "abstract", manifest_path);
    auto abstract_of = [&](const char* part) {
      auto p = dir / abs.at(part).get<std::string>();
      return in_file(p, [&] { return parse_abstract(read_file(p)); });
    };
    GrammarSet cnl{abstract_of("cnl"), {}};
    GrammarSet host{abstract_of("host"), {}};
    std::map<std::string, ConcreteGrammar> glue;
    std::map<std::string, std::string> files_of;  // language -> "cnl.lcg, host.lcg"

    for (const auto& lang : need(m, "languages", manifest_path)) {
      auto id = lang.at("id").get<std::string>();
      const auto& files = lang.at("concrete");
      auto concrete_of = [&](const char* part, const Signature& sig) {
        auto p = dir / files.at(part).get<std::string>();
        return in_file(p, [&] { return parse_concrete(read_file(p), sig); });
      };
      cnl.concretes.emplace(id, concrete_of("cnl", cnl.signature));
      host.concretes.emplace(id, concrete_of("host", host.signature));
      if (files.contains("glue")) {
        auto p = dir / files.at("glue").get<std::string>();
        glue.emplace(id, in_file(p, [&] { return read_concrete(read_file(p)); }));
      }
      files_of[id] = files.at("cnl").get<std::string>() + ", " + files.at("host").get<std::string>();
      pack.languages.push_back(id);
    }

    EmbeddingConfig cfg;
    cfg.cnl_start = m.value("cnl_start", cfg.cnl_start);
    cfg.host_start = m.value("host_start", cfg.host_start);
    cfg.chunk_categories = m.value("chunk_categories", std::vector<std::string>{});
    if (!options.chunks) cfg.chunk_categories.clear();
    cfg.costs = read_costs(m.value("costs", json::object()));
    auto coercions = m.value("coercions", std::vector<std::pair<std::string, std::string>>{});

    try {
      pack.grammar = embed(cnl, host, cfg);
    } catch (const Error& e) {
      // per-language findings name that language's concrete files
      auto diags = e.diagnostics();
      for (auto& d : diags) {
        std::string file = manifest_path.filename().string();
        for (const auto& [id, names] : files_of) {
          if (d.where.ends_with(" (" + id + ")")) file = names;
        }
        d.where = file + (d.where.empty() ? "" : ": " + d.where);
      }
      throw Error(std::move(diags));
    }
    pack.grammar = in_file(manifest_path, [&] { return add_coercions(std::move(pack.grammar), coercions, glue); });
  } catch (const json::exception& e) {
    throw Error(ErrorKind::PackError, "manifest.json", e.what());
  }

  auto corpus_dir = dir / "corpus";
  if (fs::is_directory(corpus_dir)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(corpus_dir)) {
      if (entry.path().extension() == ".tsv") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) pack.corpora[f.stem().string()] = read_corpus(read_file(f), f.filename().string());
  }
  return pack;
}

}  // namespace lcnl
