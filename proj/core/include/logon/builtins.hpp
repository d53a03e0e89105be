#pragma once

#include <string_view>

namespace logon {

/// Source text of the builtin LF theory (core/data/lf.mmt).
std::string_view builtinLfSource();

/// File name under which the builtin LF theory is reported.
inline constexpr std::string_view kBuiltinLfFile = "<builtin>/lf.mmt";

namespace lf {
inline constexpr std::string_view kTheory = "LF";
inline constexpr std::string_view kType = "LF?type";
inline constexpr std::string_view kKind = "LF?kind";
inline constexpr std::string_view kPi = "LF?Pi";
inline constexpr std::string_view kLambda = "LF?lambda";
inline constexpr std::string_view kApply = "LF?apply";
inline constexpr std::string_view kArrow = "LF?arrow";
inline constexpr std::string_view kHole = "LF?hole";
}  // namespace lf

}  // namespace logon
