#include "varattack/core/language.hpp"

#include <algorithm>
#include <cctype>

#include "varattack/core/errors.hpp"

namespace varattack {

std::string_view to_string(Language lang) {
  switch (lang) {
    case Language::C:
      return "c";
    case Language::Python:
      return "python";
    case Language::Java:
      return "java";
  }
  return "unknown";
}

std::optional<Language> language_from_string(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  if (lower == "c") return Language::C;
  if (lower == "python" || lower == "py") return Language::Python;
  if (lower == "java") return Language::Java;
  return std::nullopt;
}

Language parse_language(std::string_view name) {
  if (auto lang = language_from_string(name)) return *lang;
  throw UnsupportedLanguage("unsupported language: '" + std::string(name) + "'");
}

}  // namespace varattack
