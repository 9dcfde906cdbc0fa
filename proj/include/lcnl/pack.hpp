#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lcnl/embedding.hpp"

namespace lcnl {

/// One row of a corpus file: language, text, and either an expected tree
/// (text starting with '(' or a bare function name) or an expected
/// translation into `target`.
struct CorpusEntry {
  std::string lang;
  std::string text;
  std::string expected;
  std::optional<std::string> target;
  int line = 0;
};

struct GrammarPack {
  std::string name;
  std::filesystem::path root;
  std::vector<std::string> languages;  // manifest order
  LayeredGrammar grammar;
  std::map<std::string, std::vector<CorpusEntry>> corpora;  // by file stem
};

struct PackOptions {
  /// When false the chunk layer is left out and unparsable input is an error.
  bool chunks = true;
};

/// Reads manifest.json from `dir`, then its grammars and corpus/*.tsv.
/// Errors carry the offending file name in their locations.
GrammarPack load_pack(const std::filesystem::path& dir, const PackOptions& options = {});

/// Tab-separated corpus rows; blank lines and lines starting with '#' are
/// skipped.
std::vector<CorpusEntry> read_corpus(std::string_view text, const std::string& file);

}  // namespace lcnl
