#include "lcnl/error.hpp"

namespace lcnl {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnknownFunction: return "UnknownFunction";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::CategoryMismatch: return "CategoryMismatch";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::UnknownCategory: return "UnknownCategory";
    case ErrorKind::NegativeCost: return "NegativeCost";
    case ErrorKind::MissingLincat: return "MissingLincat";
    case ErrorKind::MissingLinRule: return "MissingLinRule";
    case ErrorKind::LinTypeError: return "LinTypeError";
    case ErrorKind::NoStartField: return "NoStartField";
    case ErrorKind::ParamExplosion: return "ParamExplosion";
    case ErrorKind::LincatClash: return "LincatClash";
    case ErrorKind::NameClash: return "NameClash";
    case ErrorKind::InvalidCostPolicy: return "InvalidCostPolicy";
    case ErrorKind::CoercionCycle: return "CoercionCycle";
    case ErrorKind::LincatIncompatible: return "LincatIncompatible";
    case ErrorKind::UnknownLanguage: return "UnknownLanguage";
    case ErrorKind::NoParse: return "NoParse";
    case ErrorKind::PackError: return "PackError";
  }
  return "Unknown";
}

std::string Diagnostic::str() const {
  std::string out(to_string(kind));
  if (!where.empty()) out += " at " + where;
  if (!message.empty()) out += ": " + message;
  return out;
}

namespace {

std::string join(const std::vector<Diagnostic>& ds) {
  std::string out;
  for (const auto& d : ds) {
    if (!out.empty()) out += "\n";
    out += d.str();
  }
  return out;
}

}  // namespace

Error::Error(Diagnostic d) : Error(std::vector<Diagnostic>{std::move(d)}) {}

Error::Error(std::vector<Diagnostic> ds)
    : std::runtime_error(join(ds)), diags_(std::move(ds)) {
  if (diags_.empty()) diags_.push_back({ErrorKind::PackError, "", "unspecified error"});
}

Error::Error(ErrorKind kind, std::string where, std::string message)
    : Error(Diagnostic{kind, std::move(where), std::move(message)}) {}

}  // namespace lcnl
