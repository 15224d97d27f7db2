#pragma once

#include <string_view>

#include "varattack/core/language.hpp"

namespace varattack::lang {

/// ASCII identifier rule of the language (Java additionally admits '$').
bool is_identifier_lexeme(std::string_view name, Language lang);

/// Keywords, contextual keywords and literal names that cannot be used as a
/// variable name without changing how the snippet parses.
bool is_reserved(std::string_view name, Language lang);

inline bool is_identifier_byte(unsigned char ch) {
  return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') ||
         ch == '_';
}

}  // namespace varattack::lang
