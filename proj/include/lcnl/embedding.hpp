#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lcnl/ast.hpp"
#include "lcnl/concrete.hpp"

namespace lcnl {

/// Weight policy of the layered grammar. Lower cost wins.
struct EmbeddingCosts {
  double use_cnl = 0.1;
  double use_host = 1.0;
  double per_chunk = 10.0;
  double coercion = 0.5;
  double unknown_word = 6.0;
};

struct EmbeddingConfig {
  std::string cnl_start = "S_CNL";
  std::string host_start = "S_Host";
  std::vector<std::string> chunk_categories;
  std::vector<std::pair<std::string, std::string>> coercions;
  EmbeddingCosts costs;
};

/// A signature with one concrete syntax per language id.
struct GrammarSet {
  Signature signature;
  std::map<std::string, ConcreteGrammar> concretes;
};

enum class Generator {
  UseCnl,
  UseHost,
  Chunk,
  ChunkCnl,
  OneChunk,
  ConsChunk,
  UseChunks,
  UnknownWord,
  ChunkUnknown,
  Coercion,
};

std::string_view to_string(Generator g);

/// Names of the generated start, chunk and list categories.
inline constexpr std::string_view kLayeredStart = "S";
inline constexpr std::string_view kChunkCat = "Chunk";
inline constexpr std::string_view kChunkListCat = "ListChunk";
inline constexpr std::string_view kUnknownCat = "Unknown";
inline constexpr std::string_view kUnknownWordFun = "UnknownWord";
inline constexpr std::string_view kChunkUnknownFun = "ChunkUnknown";

struct LayeredGrammar {
  Signature signature;
  std::map<std::string, ConcreteGrammar> concretes;
  std::map<std::string, Generator> provenance;
  std::vector<std::pair<std::string, std::string>> coercion_edges;
  EmbeddingConfig config;

  bool chunks_enabled() const { return !config.chunk_categories.empty(); }
  std::vector<std::string> languages() const;
};

/// First violated inequality of the weight policy, or nullopt.
std::optional<std::string> cost_policy_violation(const EmbeddingConfig& cfg);
/// Throws InvalidCostPolicy naming the violated inequality.
void validate_cost_policy(const EmbeddingConfig& cfg);

/// Name of the generated coercion, e.g. (NP, Person) -> np2person.
std::string coercion_name(const std::string& from, const std::string& to);

/// A directed cycle among the edges as a category path whose first and last
/// entries coincide, or an empty vector when the graph is acyclic.
std::vector<std::string> find_cycle(const std::vector<std::pair<std::string, std::string>>& edges);

/// Merges a CNL and a host grammar under a new start category with marker
/// functions, and (when chunk categories are configured) the chunk layer.
/// Coercions are not added here; see add_coercions.
LayeredGrammar embed(const GrammarSet& cnl, const GrammarSet& host, const EmbeddingConfig& cfg);

/// Adds one unary coercion per pair. `glue` supplies per-language linrules
/// for pairs whose lincats are not field compatible.
LayeredGrammar add_coercions(LayeredGrammar lg, const std::vector<std::pair<std::string, std::string>>& pairs,
                             const std::map<std::string, ConcreteGrammar>& glue = {});

}  // namespace lcnl
