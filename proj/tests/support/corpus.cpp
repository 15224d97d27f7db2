#include "corpus.hpp"

#include <array>

namespace varattack::fixtures {
namespace {

const std::array<const char*, 10> kC = {
    "int sum_array(int *arr, int n) {\n  int $1 = 0;\n  for (int $2 = 0; $2 < n; $2++) {\n"
    "    $1 += arr[$2];\n  }\n  return $1;\n}\n",

    "static int count_char(const char *s, char c) {\n  int $1 = 0;\n  const char *$2 = s;\n"
    "  while (*$2) {\n    if (*$2 == c) $1++;\n    $2++;\n  }\n  return $1;\n}\n",

    "int max_of(int a, int b, int c) {\n  int $1 = a;\n  if (b > $1) $1 = b;\n"
    "  if (c > $1) $1 = c;\n  return $1;\n}\n",

    "void copy_buf(char *dst, const char *src, int len) {\n  int $1 = 0;\n  char $2 = 0;\n"
    "  for ($1 = 0; $1 < len; ++$1) {\n    $2 = src[$1];\n    dst[$1] = $2;\n  }\n}\n",

    "double mean(const double *xs, int n) {\n  double $1 = 0.0;\n  int $2;\n"
    "  for ($2 = 0; $2 < n; $2++) $1 += xs[$2];\n  double $3 = n > 0 ? $1 / n : 0.0;\n"
    "  return $3;\n}\n",

    "struct node { int val; struct node *next; };\nint list_len(struct node *head) {\n"
    "  int $1 = 0;\n  struct node *$2 = head;\n  while ($2 != NULL) {\n    $1++;\n"
    "    $2 = $2->next;\n  }\n  return $1;\n}\n",

    "int gcd(int a, int b) {\n  int $1 = a, $2 = b;\n  while ($2 != 0) {\n"
    "    int $3 = $1 % $2;\n    $1 = $2;\n    $2 = $3;\n  }\n  return $1;\n}\n",

    "unsigned hash_str(const char *s) {\n  unsigned $1 = 5381u;\n  int $2;\n"
    "  while (($2 = *s++) != 0) {\n    $1 = (($1 << 5) + $1) + (unsigned)$2;\n  }\n"
    "  return $1;\n}\n",

    "int parse_digits(const char *buf, int len) {\n  int $1 = 0;\n  int $2 = 0;\n"
    "  while ($2 < len && buf[$2] >= '0' && buf[$2] <= '9') {\n"
    "    $1 = $1 * 10 + (buf[$2] - '0');\n    $2++;\n  }\n  return $1;\n}\n",

    "void reverse(int *v, int n) {\n  int $1 = 0;\n  int $2 = n - 1;\n  while ($1 < $2) {\n"
    "    int $3 = v[$1];\n    v[$1] = v[$2];\n    v[$2] = $3;\n    $1++;\n    $2--;\n  }\n}\n",
};

const std::array<const char*, 10> kPython = {
    "def accumulate(items):\n    $1 = 0\n    for $2 in items:\n        $1 += $2\n    return $1\n",

    "def count_words(text):\n    $1 = {}\n    for $2 in text.split():\n"
    "        $1[$2] = $1.get($2, 0) + 1\n    return $1\n",

    "def find_max(values):\n    $1 = None\n    for $2 in values:\n"
    "        if $1 is None or $2 > $1:\n            $1 = $2\n    return $1\n",

    "def read_lines(path):\n    $1 = []\n    with open(path) as $2:\n        for $3 in $2:\n"
    "            $1.append($3.strip())\n    return $1\n",

    "def squares(n):\n    $1 = [$2 * $2 for $2 in range(n)]\n    return $1\n",

    "def merge(a, b):\n    $1 = []\n    $2 = 0\n    $3 = 0\n"
    "    while $2 < len(a) and $3 < len(b):\n        if a[$2] <= b[$3]:\n"
    "            $1.append(a[$2])\n            $2 += 1\n        else:\n"
    "            $1.append(b[$3])\n            $3 += 1\n    return $1 + a[$2:] + b[$3:]\n",

    "def fib(n):\n    $1, $2 = 0, 1\n    for _ in range(n):\n        $1, $2 = $2, $1 + $2\n"
    "    return $1\n",

    "def normalize(xs):\n    $1 = sum(xs)\n    if $1 == 0:\n        return xs\n"
    "    $2 = [$3 / $1 for $3 in xs]\n    return $2\n",

    "class Stack:\n    def __init__(self):\n        self.items = []\n\n"
    "    def push(self, item):\n        $1 = len(self.items)\n        self.items.append(item)\n"
    "        return $1\n",

    "def safe_div(a, b):\n    try:\n        $1 = a / b\n    except ZeroDivisionError as $2:\n"
    "        $1 = 0\n        print($2)\n    return $1\n",
};

const std::array<const char*, 10> kJava = {
    "class Util {\n  static int sum(int[] arr) {\n    int $1 = 0;\n"
    "    for (int $2 = 0; $2 < arr.length; $2++) {\n      $1 += arr[$2];\n    }\n"
    "    return $1;\n  }\n}\n",

    "class Text {\n  int countVowels(String s) {\n    int $1 = 0;\n"
    "    for (char $2 : s.toCharArray()) {\n      if (\"aeiou\".indexOf($2) >= 0) {\n"
    "        $1++;\n      }\n    }\n    return $1;\n  }\n}\n",

    "import java.util.List;\nclass Finder {\n  static int indexOf(List<String> xs, String key) {\n"
    "    int $1 = -1;\n    for (int $2 = 0; $2 < xs.size(); $2++) {\n"
    "      if (xs.get($2).equals(key)) {\n        $1 = $2;\n        break;\n      }\n    }\n"
    "    return $1;\n  }\n}\n",

    "class Buf {\n  private int size;\n  void fill(byte[] data) {\n    int $1 = data.length;\n"
    "    byte $2 = 0;\n    for (int $3 = 0; $3 < $1; $3++) {\n      data[$3] = $2;\n    }\n"
    "    size = $1;\n  }\n}\n",

    "import java.util.HashMap;\nimport java.util.Map;\nclass Counter {\n"
    "  Map<String, Integer> count(String[] words) {\n"
    "    Map<String, Integer> $1 = new HashMap<>();\n    for (String $2 : words) {\n"
    "      $1.merge($2, 1, Integer::sum);\n    }\n    return $1;\n  }\n}\n",

    "class MathUtil {\n  static long fact(int n) {\n    long $1 = 1L;\n    int $2 = 2;\n"
    "    while ($2 <= n) {\n      $1 *= $2;\n      $2++;\n    }\n    return $1;\n  }\n}\n",

    "class Str {\n  static String rev(String s) {\n    StringBuilder $1 = new StringBuilder();\n"
    "    int $2 = s.length() - 1;\n    while ($2 >= 0) {\n      $1.append(s.charAt($2));\n"
    "      $2--;\n    }\n    return $1.toString();\n  }\n}\n",

    "class Io {\n  static int readAll(java.io.InputStream in) throws java.io.IOException {\n"
    "    int $1 = 0;\n    int $2 = in.read();\n    while ($2 != -1) {\n      $1++;\n"
    "      $2 = in.read();\n    }\n    return $1;\n  }\n}\n",

    "class Grid {\n  static int trace(int[][] m) {\n    int $1 = 0;\n"
    "    for (int $2 = 0; $2 < m.length; $2++) {\n      int $3 = m[$2][$2];\n      $1 += $3;\n"
    "    }\n    return $1;\n  }\n}\n",

    "class Parse {\n  static int toInt(String s) {\n    int $1;\n    try {\n"
    "      $1 = Integer.parseInt(s);\n    } catch (NumberFormatException $2) {\n      $1 = 0;\n"
    "    }\n    return $1;\n  }\n}\n",
};

const std::array<std::array<const char*, 3>, 5> kNames = {{
    {"total", "idx", "tmp"},
    {"acc", "pos", "cell"},
    {"result", "cursor", "hold"},
    {"value", "offset", "spare"},
    {"out", "step", "mid"},
}};

CorpusSnippet instantiate(Language lang, const char* tmpl, std::size_t shape, std::size_t variant) {
  std::string text = tmpl;
  std::vector<std::string> locals;
  for (int k = 1; k <= 3; ++k) {
    const std::string hole = "$" + std::to_string(k);
    if (text.find(hole) == std::string::npos) continue;
    const std::string name = kNames[variant][k - 1];
    for (auto p = text.find(hole); p != std::string::npos; p = text.find(hole, p + name.size())) {
      text.replace(p, hole.size(), name);
    }
    locals.push_back(name);
  }
  std::string id = std::string(to_string(lang)) + "-" + std::to_string(shape) + "-" +
                   std::to_string(variant);
  return {SourceUnit{lang, std::move(text), std::move(id)}, std::move(locals)};
}

}  // namespace

std::vector<CorpusSnippet> corpus(Language language) {
  const auto& shapes = language == Language::C ? kC : language == Language::Python ? kPython : kJava;
  std::vector<CorpusSnippet> out;
  for (std::size_t s = 0; s < shapes.size(); ++s) {
    for (std::size_t v = 0; v < kNames.size(); ++v) out.push_back(instantiate(language, shapes[s], s, v));
  }
  return out;
}

std::vector<CorpusSnippet> corpus() {
  std::vector<CorpusSnippet> out;
  for (auto lang : {Language::C, Language::Python, Language::Java}) {
    auto part = corpus(lang);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::vector<std::string> test_vocabulary() {
  return {"total",  "totals", "tot",    "idx",    "index",  "indices", "tmp",   "temp",
          "acc",    "accum",  "pos",    "position", "cell", "cells",   "result", "results",
          "res",    "cursor", "cur",    "hold",   "holder", "value",   "values", "val",
          "offset", "offs",   "spare",  "spares", "out",    "output",  "step",  "steps",
          "mid",    "middle", "buffer", "buffers", "queue", "count",   "counter", "item",
          "elem",   "node",   "ptr",    "len",    "size",   "sum",     "num",   "qmp_async_cmd_handler"};
}

}  // namespace varattack::fixtures
