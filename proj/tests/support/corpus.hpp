#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "varattack/core/types.hpp"

namespace varattack::fixtures {

/// Template-generated snippets: 10 shapes per language, each instantiated
/// with 5 sets of local names. Every snippet parses cleanly and has between
/// one and three extractable locals, named by `locals` in $1..$3 order.
struct CorpusSnippet {
  SourceUnit source;
  std::vector<std::string> locals;
};

std::vector<CorpusSnippet> corpus();                   // all 150
std::vector<CorpusSnippet> corpus(Language language);  // 50 of one language

/// Small vocabulary for surrogate substitutes in tests.
std::vector<std::string> test_vocabulary();

}  // namespace varattack::fixtures
