#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace varattack {

enum class Language { C, Python, Java };

std::string_view to_string(Language lang);

/// Accepts "c", "python", "java" (case-insensitive) plus the usual file
/// extensions ("py"). Returns nullopt for anything else.
std::optional<Language> language_from_string(std::string_view name);

/// Like language_from_string but throws UnsupportedLanguage.
Language parse_language(std::string_view name);

}  // namespace varattack
