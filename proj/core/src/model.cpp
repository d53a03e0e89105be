#include "logon/model.hpp"

namespace logon {

std::string qualify(std::string_view theory, std::string_view name) {
  std::string out(theory);
  out += '?';
  out += name;
  return out;
}

std::string_view theoryOf(std::string_view path) {
  auto q = path.find('?');
  return q == std::string_view::npos ? std::string_view{} : path.substr(0, q);
}

std::string_view localNameOf(std::string_view path) {
  auto q = path.find('?');
  return q == std::string_view::npos ? path : path.substr(q + 1);
}

std::string SlotId::str() const {
  return constant + (component == Component::Type ? "#tp" : "#def");
}

std::optional<SlotId> SlotId::parse(std::string_view s) {
  if (s.ends_with("#tp")) return SlotId::type(std::string(s.substr(0, s.size() - 3)));
  if (s.ends_with("#def")) return SlotId::definiens(std::string(s.substr(0, s.size() - 4)));
  return std::nullopt;
}

const ConstantDecl* TheoryDecl::find(std::string_view local) const {
  for (const auto& c : constants)
    if (c.name == local) return &c;
  return nullptr;
}

const TheoryDecl* Document::findTheory(std::string_view name) const {
  for (const auto& t : theories)
    if (t.name == name) return &t;
  return nullptr;
}

std::string_view severityName(Severity s) {
  switch (s) {
    case Severity::Error:
      return "error";
    case Severity::Warning:
      return "warning";
    case Severity::Info:
      return "info";
  }
  return "error";
}

}  // namespace logon
