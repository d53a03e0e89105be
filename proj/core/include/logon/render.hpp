#pragma once

#include <string>
#include <vector>

#include "logon/term_parser.hpp"

namespace logon {

struct RenderOptions {
  /// Show inferred parts: implicit arguments and inferred binder types.
  bool showInferred = false;
  /// Display Pi with an unused binder as an arrow.
  bool arrows = true;
  /// Parenthesize every compound operand of an infix notation, even where
  /// precedences would not require it.
  bool parenthesize = false;
};

/// Where a subterm ended up in the rendered text.
struct RenderSpan {
  std::vector<std::size_t> path;  // child indices from the root
  std::size_t start = 0;
  std::size_t end = 0;
  bool inferred = false;
};

struct Rendered {
  std::string text;
  std::vector<RenderSpan> spans;  // pre-order
};

/// Renders a term using the notations of `table`, inserting parentheses
/// where precedences require them.
Rendered render(const TermPtr& t, const NotationTable& table, const RenderOptions& options = {});
std::string renderText(const TermPtr& t, const NotationTable& table, const RenderOptions& options = {});

}  // namespace logon
