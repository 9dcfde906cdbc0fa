#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lcnl/api.hpp"
#include "lcnl/grammar_lang.hpp"
#include "lcnl/pack.hpp"
#include "lcnl/translator.hpp"

namespace py = pybind11;
using namespace lcnl;

namespace {

struct PyPack {
  GrammarPack pack;
  std::shared_ptr<const Translator> translator;
};

PyPack open_pack(const std::string& dir, bool chunks) {
  PackOptions opt;
  opt.chunks = chunks;
  PyPack p{load_pack(dir, opt), nullptr};
  p.translator = std::make_shared<const Translator>(p.pack.grammar);
  return p;
}

}  // namespace

PYBIND11_MODULE(_lcnl, m) {
  m.doc() = "Layered controlled-language grammar engine";

  py::register_exception<Error>(m, "LcnlError");

  m.def("tokenize", &tokenize, py::arg("text"));

  py::class_<PyPack>(m, "Pack")
      .def_property_readonly("name", [](const PyPack& p) { return p.pack.name; })
      .def_property_readonly("languages", [](const PyPack& p) { return p.pack.languages; })
      .def_property_readonly("corpora",
                             [](const PyPack& p) {
                               py::dict out;
                               for (const auto& [name, rows] : p.pack.corpora) {
                                 py::list l;
                                 for (const auto& r : rows) {
                                   l.append(py::make_tuple(r.lang, r.text, r.expected, r.target));
                                 }
                                 out[py::str(name)] = l;
                               }
                               return out;
                             })
      .def("functions",
           [](const PyPack& p) {
             std::vector<std::string> out;
             for (const auto& [name, f] : p.pack.grammar.signature.functions()) out.push_back(name);
             return out;
           })
      .def(
          "translate_json",
          [](const PyPack& p, const std::string& text, const std::string& src, const std::string& tgt,
             std::size_t k) {
            py::gil_scoped_release release;
            return translation_json(p.translator->translate(text, src, tgt, k));
          },
          py::arg("text"), py::arg("src"), py::arg("tgt"), py::arg("k") = 5)
      .def(
          "parse",
          [](const PyPack& p, const std::string& text, const std::string& lang, std::size_t k) {
            ParseResult res;
            {
              py::gil_scoped_release release;
              res = p.translator->parse(text, lang, k);
            }
            std::vector<std::pair<std::string, double>> out;
            for (const auto& t : res.trees) out.emplace_back(serialize_tree(t.tree), t.cost);
            return out;
          },
          py::arg("text"), py::arg("lang"), py::arg("k") = 5)
      .def(
          "linearize",
          [](const PyPack& p, const std::string& tree, const std::string& lang) {
            auto t = parse_tree(tree, p.pack.grammar.signature);
            return p.translator->linearize_text(t.tree, lang);
          },
          py::arg("tree"), py::arg("lang"))
      .def(
          "tree_cost",
          [](const PyPack& p, const std::string& tree) {
            return tree_cost(parse_tree(tree, p.pack.grammar.signature), p.pack.grammar.signature);
          },
          py::arg("tree"));

  m.def("load_pack", &open_pack, py::arg("path"), py::arg("chunks") = true);
}
