#include "varattack/lang/lexicon.hpp"

#include <algorithm>
#include <array>

namespace varattack::lang {
namespace {

constexpr std::string_view kCReserved[] = {
    "NULL", "_Alignas", "_Alignof", "_Atomic", "_Bool", "_Complex", "_Generic", "_Imaginary",
    "_Noreturn", "_Static_assert", "_Thread_local", "__asm__", "__attribute__", "__based",
    "__cdecl", "__clrcall", "__declspec", "__extension__", "__fastcall", "__forceinline",
    "__inline", "__inline__", "__restrict", "__restrict__", "__stdcall", "__thiscall",
    "__thread", "__unaligned", "__vectorcall", "__volatile__", "alignas", "alignof", "asm",
    "auto", "bool", "break", "case", "char", "const", "constexpr", "continue", "default",
    "defined", "do", "double", "else", "enum", "extern", "false", "float", "for", "goto", "if",
    "inline", "int", "long", "noreturn", "nullptr", "offsetof", "register", "restrict",
    "return", "short", "signed", "sizeof", "static", "static_assert", "struct", "switch",
    "thread_local", "true", "typedef", "typeof", "typeof_unqual", "union", "unsigned", "void",
    "volatile", "while"};

constexpr std::string_view kPythonReserved[] = {
    "False", "None", "True", "_", "and", "as", "assert", "async", "await", "break", "case",
    "class", "continue", "def", "del", "elif", "else", "except", "exec", "finally", "for",
    "from", "global", "if", "import", "in", "is", "lambda", "match", "nonlocal", "not", "or",
    "pass", "print", "raise", "return", "try", "type", "while", "with", "yield"};

constexpr std::string_view kJavaReserved[] = {
    "_", "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class",
    "const", "continue", "default", "do", "double", "else", "enum", "exports", "extends",
    "false", "final", "finally", "float", "for", "goto", "if", "implements", "import",
    "instanceof", "int", "interface", "long", "module", "native", "new", "null", "open",
    "opens", "package", "permits", "private", "protected", "provides", "public", "record",
    "requires", "return", "sealed", "short", "static", "strictfp", "super", "switch",
    "synchronized", "this", "throw", "throws", "to", "transient", "transitive", "true", "try",
    "uses", "var", "void", "volatile", "when", "while", "with", "yield"};

template <std::size_t N>
bool contains(const std::string_view (&words)[N], std::string_view name) {
  return std::binary_search(std::begin(words), std::end(words), name);
}

static_assert(std::is_sorted(std::begin(kCReserved), std::end(kCReserved)));
static_assert(std::is_sorted(std::begin(kPythonReserved), std::end(kPythonReserved)));
static_assert(std::is_sorted(std::begin(kJavaReserved), std::end(kJavaReserved)));

}  // namespace

bool is_identifier_lexeme(std::string_view name, Language lang) {
  if (name.empty()) return false;
  auto is_start = [&](unsigned char ch) {
    return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || ch == '_' ||
           (lang == Language::Java && ch == '$');
  };
  auto is_part = [&](unsigned char ch) {
    return is_identifier_byte(ch) || (lang == Language::Java && ch == '$');
  };
  if (!is_start(static_cast<unsigned char>(name.front()))) return false;
  return std::all_of(name.begin() + 1, name.end(),
                     [&](char ch) { return is_part(static_cast<unsigned char>(ch)); });
}

bool is_reserved(std::string_view name, Language lang) {
  switch (lang) {
    case Language::C:
      return contains(kCReserved, name);
    case Language::Python:
      return contains(kPythonReserved, name);
    case Language::Java:
      return contains(kJavaReserved, name);
  }
  return false;
}

}  // namespace varattack::lang
