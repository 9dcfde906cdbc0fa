// lcnl: command-line front end for grammar packs.
//
// Exit codes: 0 ok, 1 usage, 2 pack or grammar error, 3 no parse.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "lcnl/api.hpp"
#include "lcnl/grammar_lang.hpp"
#include "lcnl/pack.hpp"
#include "lcnl/service.hpp"
#include "lcnl/translator.hpp"

namespace {

using namespace lcnl;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Positional arguments: [pack] and, for some commands, one more operand.
// The pack may come from LCNL_PACK instead.
struct Operands {
  std::string pack;
  std::string operand;
};

Operands split_operands(const std::vector<std::string>& pos, bool wants_operand) {
  Operands out;
  std::size_t need = wants_operand ? 1 : 0;
  if (pos.size() == need + 1) {
    out.pack = pos[0];
    if (wants_operand) out.operand = pos[1];
  } else if (pos.size() == need) {
    const char* env = std::getenv("LCNL_PACK");
    if (!env || !*env) throw UsageError("no grammar pack given and LCNL_PACK is not set");
    out.pack = env;
    if (wants_operand) out.operand = pos[0];
  } else {
    throw UsageError("unexpected number of arguments");
  }
  return out;
}

const char* ansi(SpanLayer l) {
  switch (l) {
    case SpanLayer::Semantic: return "\x1b[32m";
    case SpanLayer::Syntactic: return "\x1b[33m";
    default: return "\x1b[31m";
  }
}

char marker(SpanLayer l) {
  switch (l) {
    case SpanLayer::Semantic: return 'G';
    case SpanLayer::Syntactic: return 'Y';
    default: return 'R';
  }
}

// Byte offset of code point `cp` in `s`.
std::size_t byte_at(const std::string& s, int cp) {
  std::size_t i = 0;
  for (int n = 0; i < s.size() && n < cp; ++n) {
    ++i;
    while (i < s.size() && (static_cast<unsigned char>(s[i]) & 0xC0) == 0x80) ++i;
  }
  return i;
}

std::string render(const std::string& text, const std::vector<ConfidenceSpan>& spans, bool color) {
  std::string out;
  std::size_t at = 0;
  for (const auto& sp : spans) {
    auto b = byte_at(text, sp.start), e = byte_at(text, sp.end);
    out += text.substr(at, b - at);
    auto body = text.substr(b, e - b);
    if (color) {
      out += std::string(ansi(sp.layer)) + body + "\x1b[0m";
    } else {
      out += std::string("{") + marker(sp.layer) + "|" + body + "}";
    }
    at = e;
  }
  return out + text.substr(at);
}

std::string fixed_cost(double c) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(3);
  ss << c;
  return ss.str();
}

Translator load(const std::string& dir, bool no_chunks) {
  PackOptions opt;
  opt.chunks = !no_chunks;
  return Translator(load_pack(dir, opt).grammar);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Layered controlled-language grammar engine"};
  app.require_subcommand(1);

  std::vector<std::string> pos;
  std::string lang, from, to, in_file, out_file, host = "127.0.0.1";
  std::size_t k = 5;
  int port = 8080;
  bool json = false, no_color = false, no_chunks = false, stats = false, show_tree = false;

  auto* compile_cmd = app.add_subcommand("compile", "validate a pack and print grammar statistics");
  auto* parse_cmd = app.add_subcommand("parse", "print ranked analyses");
  auto* lin_cmd = app.add_subcommand("linearize", "linearize a tree");
  auto* tr_cmd = app.add_subcommand("translate", "translate one sentence");
  auto* batch_cmd = app.add_subcommand("batch", "translate one sentence per line");
  auto* serve_cmd = app.add_subcommand("serve", "run the HTTP service");

  for (auto* c : {compile_cmd, parse_cmd, lin_cmd, tr_cmd, batch_cmd, serve_cmd}) {
    c->add_option("args", pos, "[pack] and operand; the pack defaults to $LCNL_PACK");
    c->add_flag("--no-chunks", no_chunks, "leave out the chunk layer");
  }
  for (auto* c : {parse_cmd, lin_cmd}) c->add_option("--lang", lang, "language id")->required();
  for (auto* c : {parse_cmd, tr_cmd, batch_cmd}) {
    c->add_option("--k", k, "number of analyses")->check(CLI::Range(1, kMaxK));
  }
  for (auto* c : {tr_cmd, batch_cmd}) {
    c->add_option("--from", from, "source language")->required();
    c->add_option("--to", to, "target language")->required();
    c->add_flag("--json", json, "emit TranslationResult JSON");
    c->add_flag("--no-color", no_color, "mark spans as {G|..} {Y|..} {R|..} instead of ANSI colors");
  }
  parse_cmd->add_flag("--json", json, "emit JSON");
  parse_cmd->add_flag("--stats", stats, "print chart statistics");
  tr_cmd->add_flag("--stats", stats, "print chart statistics");
  tr_cmd->add_flag("--tree", show_tree, "also print the tree, cost and alternatives");
  batch_cmd->add_option("--in", in_file, "input file")->required();
  batch_cmd->add_option("--out", out_file, "output file")->required();
  serve_cmd->add_option("--port", port, "port")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--host", host, "address to bind");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (compile_cmd->parsed()) {
      auto ops = split_operands(pos, false);
      PackOptions opt;
      opt.chunks = !no_chunks;
      auto pack = load_pack(ops.pack, opt);
      Translator t(pack.grammar);
      const auto& sig = pack.grammar.signature;
      std::cout << "pack " << pack.name << ": " << sig.categories().size() << " categories, "
                << sig.functions().size() << " functions\n";
      for (const auto& l : t.languages()) {
        std::cout << "  " << l << ": " << t.parsing_grammar(l).nonterminals().size() << " nonterminals, "
                  << t.parsing_grammar(l).production_count() << " productions\n";
      }
      for (const auto& [name, rows] : pack.corpora) std::cout << "  corpus " << name << ": " << rows.size() << " rows\n";
      return 0;
    }
    if (serve_cmd->parsed()) {
      auto ops = split_operands(pos, false);
      auto t = load(ops.pack, no_chunks);
      Service svc(t);
      int bound = svc.bind(host, port);
      if (bound < 0) {
        std::cerr << "cannot bind " << host << ":" << port << "\n";
        return 2;
      }
      std::cerr << "listening on " << host << ":" << bound << "\n";
      return svc.listen_after_bind() ? 0 : 2;
    }

    auto ops = split_operands(pos, !batch_cmd->parsed());
    auto t = load(ops.pack, no_chunks);

    if (lin_cmd->parsed()) {
      std::optional<TypedTree> tree;
      try {
        tree = parse_tree(ops.operand, t.grammar().signature);
      } catch (const Error& e) {
        throw UsageError(std::string("bad tree: ") + e.what());
      }
      std::cout << t.linearize_text(tree->tree, lang) << "\n";
      return 0;
    }
    if (parse_cmd->parsed()) {
      auto res = t.parse(ops.operand, lang, k);
      if (json) {
        std::cout << parse_json(res) << "\n";
      } else {
        for (const auto& tr : res.trees) std::cout << fixed_cost(tr.cost) << "\t" << serialize_tree(tr.tree) << "\n";
      }
      if (stats) {
        std::cerr << "goals " << res.stats.goals << " edges " << res.stats.edges << " pops " << res.stats.pops << "\n";
      }
      if (res.trees.empty()) {
        std::cerr << "no parse\n";
        return 3;
      }
      return 0;
    }
    if (tr_cmd->parsed()) {
      if (stats) {
        auto res = t.parse(ops.operand, from, k);
        std::cerr << "goals " << res.stats.goals << " edges " << res.stats.edges << " pops " << res.stats.pops << "\n";
      }
      auto r = t.translate(ops.operand, from, to, k);
      if (json) {
        std::cout << translation_json(r, show_tree) << "\n";
        return 0;
      }
      std::cout << render(r.target, r.spans, !no_color) << "\n";
      if (show_tree) {
        std::cout << "tree: " << r.tree << "\ncost: " << fixed_cost(r.cost) << "\n";
        for (const auto& a : r.alternatives) std::cout << "alt " << fixed_cost(a.cost) << ": " << a.target << "\n";
      }
      return 0;
    }
    if (batch_cmd->parsed()) {
      std::ifstream in(in_file);
      if (!in) throw UsageError("cannot read " + in_file);
      std::ofstream out(out_file);
      if (!out) throw UsageError("cannot write " + out_file);
      std::string line;
      int rc = 0;
      while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        try {
          auto r = t.translate(line, from, to, k);
          out << (json ? translation_json(r) : no_color ? render(r.target, r.spans, false) : r.target) << "\n";
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::NoParse) throw;
          out << "\n";
          rc = 3;
        }
      }
      return rc;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    for (const auto& d : e.diagnostics()) std::cerr << "error: " << d.str() << "\n";
    if (e.kind() == ErrorKind::NoParse) return 3;
    if (e.kind() == ErrorKind::UnknownLanguage) return 1;
    return 2;
  }
  return 1;
}
