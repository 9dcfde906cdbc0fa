#pragma once

#include <string_view>

#include "lcnl/ast.hpp"
#include "lcnl/concrete.hpp"

namespace lcnl {

/// Parses and validates an abstract grammar:
///
///   abstract Phrases {
///     flags startcat = S_CNL ;
///     cat Person ; Fact ;
///     fun aged : Person -> Numeral -> Fact [layer=cnl, cost=0.2] ;
///   }
///
/// Costs default to 1.0 and layers to neutral.
Signature parse_abstract(std::string_view source);

/// Parses a concrete grammar without checking it against a signature.
ConcreteGrammar read_concrete(std::string_view source);

/// Parses a concrete grammar and validates it against `sig`; throws an Error
/// carrying every finding.
ConcreteGrammar parse_concrete(std::string_view source, const Signature& sig);

}  // namespace lcnl
