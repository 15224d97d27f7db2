#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "support/corpus.hpp"
#include "varattack/core/errors.hpp"
#include "varattack/lang/extract.hpp"
#include "varattack/lang/lexicon.hpp"
#include "varattack/lang/parse_tree.hpp"
#include "varattack/lang/rename.hpp"
#include "varattack/surrogate/surrogate.hpp"

using namespace varattack;
using namespace varattack::lang;

namespace {

SourceUnit c(std::string text) { return {Language::C, std::move(text), "t"}; }
SourceUnit py(std::string text) { return {Language::Python, std::move(text), "t"}; }
SourceUnit java(std::string text) { return {Language::Java, std::move(text), "t"}; }

std::vector<std::string> names(const SourceUnit& src, bool params = false) {
  AttackConfig cfg;
  cfg.include_parameters = params;
  std::vector<std::string> out;
  for (const auto& v : extract_variables(src, cfg)) out.push_back(v.name);
  return out;
}

using Names = std::vector<std::string>;

SourceUnit monitor_flush() {
  std::ifstream in(VARATTACK_TEST_DATA "/monitor_flush.c");
  std::stringstream ss;
  ss << in.rdbuf();
  return c(ss.str());
}

}  // namespace

TEST(Extract, FreeNamesAreNotVariables) {
  auto vars = extract_variables(c("int f(){int y=0; return y+g;}"), {});
  ASSERT_EQ(vars.size(), 1u);
  EXPECT_EQ(vars[0].name, "y");
  ASSERT_EQ(vars[0].occurrences.size(), 2u);
  EXPECT_EQ(vars[0].occurrences[0], (OccurrenceSpan{12, 13}));
  EXPECT_EQ(vars[0].occurrences[1], (OccurrenceSpan{24, 25}));
}

TEST(Extract, FieldCollisionExcluded) {
  EXPECT_EQ(names(java("class A {\n  int count;\n  void m() {\n    int count = 0;\n    count++;\n  }\n}\n")),
            Names{});
  EXPECT_EQ(names(java("class A {\n  int count;\n  void m() {\n    int total = 0;\n    total += count;\n  }\n}\n")),
            Names{"total"});
  EXPECT_EQ(names(c("struct P { int x; };\nint f(void) { struct P p = {0}; int x = 1; p.x = x; return x; }")),
            Names{"p"});
  EXPECT_EQ(names(py("class K:\n    y = 1\n    def m(self):\n        y = 2\n        z = y\n        return z\n")),
            Names{"z"});
  EXPECT_EQ(names(py("def f(o):\n    size = 1\n    o.size = size\n    return o\n")), Names{});
}

TEST(Extract, ParametersOnlyWhenRequested) {
  auto src = py("def f(x):\n  t = x\n  return t\n");
  EXPECT_EQ(names(src), Names{"t"});
  EXPECT_EQ(names(src, true), (Names{"x", "t"}));
  auto j = java("class A { int f(int n) { int m = n * 2; return m; } }");
  EXPECT_EQ(names(j), Names{"m"});
  EXPECT_EQ(names(j, true), (Names{"n", "m"}));
  auto cc = c("int f(int n) { int m = n; return m; }");
  EXPECT_EQ(names(cc), Names{"m"});
  EXPECT_EQ(names(cc, true), (Names{"n", "m"}));
}

TEST(Extract, DeclaredAndInitializedOnly) {
  EXPECT_EQ(names(c("int f(void) { int u; int v = 1; return v; }")), Names{"v"});
  EXPECT_EQ(names(c("int f(void) { int u; u = 4; return u; }")), Names{"u"});
  EXPECT_EQ(names(java("class A { int f() { int u; u = 4; return u; } }")), Names{"u"});
  EXPECT_EQ(names(c("int f(void) { int u; u += 4; return 0; }")), Names{});
}

TEST(Extract, MultiDeclarationGivesSeparateIdentifiers) {
  auto vars = extract_variables(c("int f(void) { int a = 0, b = 1; return a + b; }"), {});
  ASSERT_EQ(vars.size(), 2u);
  EXPECT_EQ(vars[0].name, "a");
  EXPECT_EQ(vars[1].name, "b");
}

TEST(Extract, LoopInductionVariablesIncluded) {
  EXPECT_EQ(names(c("int f(int n) { int s = 0; for (int i = 0; i < n; i++) s += i; return s; }")),
            (Names{"s", "i"}));
  EXPECT_EQ(names(py("def f(xs):\n    s = 0\n    for v in xs:\n        s += v\n    return s\n")),
            (Names{"s", "v"}));
  EXPECT_EQ(names(java("class A { int f(int[] xs) { int s = 0; for (int v : xs) s += v; return s; } }")),
            (Names{"s", "v"}));
}

TEST(Extract, ShadowingIsScopeAware) {
  // The inner block's `y` shadows a global; only local spans are returned.
  auto src = c("int y = 5;\nint f(void) {\n  int r = y;\n  {\n    int y = 2;\n    r += y;\n  }\n  return r;\n}\n");
  auto vars = extract_variables(src, {});
  ASSERT_EQ(vars.size(), 2u);
  EXPECT_EQ(vars[0].name, "r");
  EXPECT_EQ(vars[1].name, "y");
  for (const auto& occ : vars[1].occurrences) EXPECT_GT(occ.byte_start, src.text.find("{\n    int y"));
  EXPECT_EQ(vars[1].occurrences.size(), 2u);

  // A Python local shadowing a module-level import is not renameable;
  // a parameter shadowing nothing stays a parameter.
  EXPECT_EQ(names(py("import os\ndef f():\n    path = os.getcwd()\n    return path\n")), Names{"path"});
}

TEST(Extract, MacroSpansExcluded) {
  auto src = c("#define SQ(a) ((a) * (a))\nint f(void) {\n  int q = 1;\n  int w = SQ(q);\n  int z = 2;\n  return w + z;\n}\n");
  EXPECT_EQ(names(src), (Names{"w", "z"}));
  EXPECT_EQ(names(c("int f(void) { int k = 0; MAX(k, 1); int t = 3; return t; }")), Names{"t"});
}

TEST(Extract, ImportsAndDefinitionsExcluded) {
  EXPECT_EQ(names(py("def f():\n    import json\n    def g():\n        return 1\n    h = g()\n    return h\n")),
            Names{"h"});
}

TEST(Extract, ModuleLevelPythonAndTopLevelCStatements) {
  EXPECT_EQ(names(py("x = 1\ny = x + 2\nprint(y)\n")), (Names{"x", "y"}));
  EXPECT_EQ(names(c("int y=0; return y;")), Names{"y"});
}

TEST(Extract, SyntaxErrorsAreParseErrors) {
  EXPECT_THROW(extract_variables(c("int f( {"), {}), ParseError);
  EXPECT_THROW(extract_variables(py("def f(:\n  pass\n"), {}), ParseError);
  EXPECT_THROW(extract_variables(java("class { int"), {}), ParseError);
  EXPECT_THROW(extract_variables(c(""), {}), ParseError);
}

TEST(Extract, CorpusLocalsAndInvariants) {
  for (const auto& snip : fixtures::corpus()) {
    auto a = analyze_snippet(snip.source, false);
    Names got;
    for (const auto& v : a.variables) {
      got.push_back(v.name);
      ASSERT_FALSE(v.occurrences.empty());
      for (std::size_t i = 0; i < v.occurrences.size(); ++i) {
        const auto& o = v.occurrences[i];
        EXPECT_EQ(snip.source.text.substr(o.byte_start, o.size()), v.name);
        if (i > 0) {
          EXPECT_LT(v.occurrences[i - 1].byte_start, o.byte_start);
        }
      }
      EXPECT_TRUE(is_identifier_lexeme(v.name, snip.source.language));
      EXPECT_FALSE(is_reserved(v.name, snip.source.language));
      EXPECT_TRUE(a.identifiers.contains(v.name));
    }
    EXPECT_EQ(got, snip.locals) << snip.source.origin_id;
    for (std::size_t i = 1; i < a.variables.size(); ++i) {
      EXPECT_LT(a.variables[i - 1].first_offset(), a.variables[i].first_offset());
    }
  }
}

TEST(Extract, DeterministicAndStableUnderTrailingWhitespace) {
  for (const auto& snip : fixtures::corpus()) {
    auto first = extract_variables(snip.source, {});
    EXPECT_EQ(first, extract_variables(snip.source, {}));
    SourceUnit padded = snip.source;
    padded.text += "\n\n";
    EXPECT_EQ(first, extract_variables(padded, {})) << snip.source.origin_id;
  }
}

TEST(Lexicon, Rules) {
  EXPECT_FALSE(is_identifier_lexeme("2dict", Language::Python));
  EXPECT_FALSE(is_identifier_lexeme("", Language::C));
  EXPECT_FALSE(is_identifier_lexeme("a-b", Language::C));
  EXPECT_TRUE(is_identifier_lexeme("_x9", Language::C));
  EXPECT_TRUE(is_identifier_lexeme("$x", Language::Java));
  EXPECT_FALSE(is_identifier_lexeme("$x", Language::C));
  EXPECT_TRUE(is_reserved("for", Language::C));
  EXPECT_TRUE(is_reserved("while", Language::C));
  EXPECT_TRUE(is_reserved("lambda", Language::Python));
  EXPECT_TRUE(is_reserved("None", Language::Python));
  EXPECT_TRUE(is_reserved("instanceof", Language::Java));
  EXPECT_TRUE(is_reserved("null", Language::Java));
  EXPECT_FALSE(is_reserved("lambda", Language::Java));
  EXPECT_FALSE(is_reserved("queue", Language::C));
}

TEST(IsValidSubstitute, Examples) {
  auto src = c("int f(void) { int y = 0; return y + g; }");
  EXPECT_FALSE(is_valid_substitute("for", src, Language::C));
  EXPECT_FALSE(is_valid_substitute("2dict", src, Language::C));
  EXPECT_FALSE(is_valid_substitute("g", src, Language::C));
  EXPECT_FALSE(is_valid_substitute("f", src, Language::C));
  EXPECT_TRUE(is_valid_substitute("z", src, Language::C));

  auto fig = monitor_flush();
  ASSERT_NE(fig.text.find("buffer"), std::string::npos);
  EXPECT_TRUE(is_valid_substitute("queue", fig, Language::C));
  EXPECT_FALSE(is_valid_substitute("mon", fig, Language::C));
  EXPECT_FALSE(is_valid_substitute("qstring_new", fig, Language::C));
}

TEST(Rename, SpanReplacement) {
  auto src = c("int y=0; return y;");
  auto r = Renamer::for_source(src, {});
  EXPECT_EQ(r.apply(r.identity()).text, src.text);
  EXPECT_EQ(rename(src, Chromosome::parse("y:z")).text, "int z=0; return z;");
}

TEST(Rename, BufferToQueue) {
  auto fig = monitor_flush();
  auto r = Renamer::for_source(fig, {});
  auto out = r.apply(r.identity().with_substitute("buffer", "queue"));
  EXPECT_EQ(out.text.find("buffer"), std::string::npos);
  std::string expect = fig.text;
  for (auto p = expect.find("buffer"); p != std::string::npos; p = expect.find("buffer", p)) {
    expect.replace(p, 6, "queue");
  }
  EXPECT_EQ(out.text, expect);
  EXPECT_TRUE(parse_equivalent(ParseTree::parse(fig), ParseTree::parse(out)));
}

TEST(Rename, Errors) {
  auto src = c("int f(void) { int a = 0; int b = 1; return a + b + g; }");
  auto r = Renamer::for_source(src, {});
  Chromosome id = r.identity();
  EXPECT_THROW(r.apply(id.with_substitute("a", "g")), CollisionError);
  EXPECT_THROW(r.apply(id.with_substitute("a", "b")), CollisionError);
  EXPECT_THROW(r.apply(id.with_substitute("a", "x").with_substitute("b", "x")), CollisionError);
  EXPECT_THROW(r.apply(id.with_substitute("a", "while")), InvalidName);
  EXPECT_THROW(r.apply(id.with_substitute("a", "9lives")), InvalidName);
  EXPECT_NO_THROW(r.apply(id.with_substitute("a", "b2").with_substitute("b", "a2")));
  // Swapping two variables' names is collision-free in intent but each
  // target already occurs in the snippet.
  EXPECT_THROW(r.apply(id.with_substitute("a", "b").with_substitute("b", "a")), CollisionError);
  EXPECT_THROW(r.apply(Chromosome::parse("a:x")), Error);
}

TEST(Rename, InverseRestoresOriginalOn50Snippets) {
  auto all = fixtures::corpus();
  int checked = 0;
  for (std::size_t i = 0; i < all.size(); i += 3) {
    const auto& src = all[i].source;
    auto r = Renamer::for_source(src, {});
    Chromosome forward = r.identity();
    for (std::size_t g = 0; g < forward.size(); ++g) {
      forward = forward.with_substitute(g, forward[g].variable + "_r");
    }
    SourceUnit renamed = r.apply(forward);
    EXPECT_NE(renamed.text, src.text);
    EXPECT_TRUE(parse_equivalent(ParseTree::parse(src), ParseTree::parse(renamed)));

    auto back = Renamer::for_source(renamed, {});
    std::vector<Gene> inverse;
    const Chromosome renamed_identity = back.identity();
    for (const auto& g : renamed_identity.genes()) {
      inverse.push_back({g.variable, g.variable.substr(0, g.variable.size() - 2)});
    }
    EXPECT_EQ(back.apply(Chromosome(inverse)).text, src.text) << src.origin_id;
    ++checked;
  }
  EXPECT_EQ(checked, 50);
}

TEST(ParseTree, EquivalenceIgnoresOnlyIdentifierText) {
  auto a = ParseTree::parse(c("int f(void) { int x = 1; return x; }"));
  auto b = ParseTree::parse(c("int f(void) { int longer_name = 1; return longer_name; }"));
  auto d = ParseTree::parse(c("int f(void) { int x = 2; return x; }"));
  auto e = ParseTree::parse(c("int f(void) { int x = 1; return -x; }"));
  EXPECT_TRUE(parse_equivalent(a, b));
  EXPECT_FALSE(parse_equivalent(a, d));
  EXPECT_FALSE(parse_equivalent(a, e));
}

TEST(Mask, SingleOccurrence) {
  auto src = c("int y=0; return y;");
  auto vars = extract_variables(src, {});
  auto masked = mask_occurrence(src, vars[0].occurrences[0], "<unk>");
  EXPECT_EQ(masked.text, "int <unk>=0; return y;");
  auto second = mask_occurrence(src, vars[0].occurrences[1], "<unk>");
  EXPECT_EQ(second.text, "int y=0; return <unk>;");
  EXPECT_EQ(masked.text.substr(vars[0].occurrences[0].byte_start, 5), "<unk>");
  EXPECT_EQ(mask_occurrence(src, vars[0].occurrences[0], "y").text, src.text);
}

TEST(Mask, BadSpans) {
  auto src = c("int y=0; return y;");
  EXPECT_THROW(mask_occurrence(src, {4, 4}, "<unk>"), SpanError);
  EXPECT_THROW(mask_occurrence(src, {3, 5}, "<unk>"), SpanError);
  EXPECT_THROW(mask_occurrence(src, {16, 40}, "<unk>"), SpanError);
  EXPECT_THROW(mask_occurrence(src, {0, 2}, "<unk>"), SpanError);  // part of "int"
}

// With the surrogate, masking moves the score by w("unk") - w("y") since the
// tokenizer reads "<unk>" as the word "unk".
TEST(Mask, SurrogateConfidenceMovesIffWeightsDiffer) {
  auto src = c("int y=0; return y;");
  auto occ = extract_variables(src, {})[0].occurrences[0];
  auto base = surrogate::surrogate_classify(src.text);
  auto masked = surrogate::surrogate_classify(mask_occurrence(src, occ, "<unk>").text);
  ASSERT_NE(surrogate::token_weight("unk"), surrogate::token_weight("y"));
  EXPECT_NE(base.confidences[0], masked.confidences[0]);
  auto same = surrogate::surrogate_classify(mask_occurrence(src, occ, "y").text);
  EXPECT_EQ(base, same);
}

TEST(ParseTree, ReparseIsIdentical) {
  for (const auto& snip : fixtures::corpus()) {
    auto a = ParseTree::parse(snip.source);
    auto b = ParseTree::parse(snip.source);
    EXPECT_EQ(a.structure_signature(), b.structure_signature());
    EXPECT_EQ(a.sexp(), b.sexp());
    EXPECT_FALSE(a.has_error());
  }
}
