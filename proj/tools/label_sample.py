#!/usr/bin/env python3
"""Write data/sample.jsonl, labelling each item with the surrogate model's prediction."""
import json
import math
import re
import sys

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3


def weight(tok):
    h = FNV_OFFSET
    for b in tok.encode():
        h = ((h ^ b) * FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return ((h % 2001) - 1000) / 1000.0


def label(code, pair=None):
    s = sum(weight(t) for t in re.findall(r"[A-Za-z0-9_]+", code))
    if pair is not None:
        s += sum(weight(t) for t in re.findall(r"[A-Za-z0-9_]+", pair))
    p0 = 1.0 / (1.0 + math.exp(-2.0 * s))
    return 0 if p0 >= 1.0 - p0 else 1


ITEMS = [
    ("c-sum", "c", "int sum(const int *xs, int n) {\n  int total = 0;\n  for (int i = 0; i < n; i++) {\n    total += xs[i];\n  }\n  return total;\n}\n"),
    ("c-flush", "c", "static int flush(Monitor *mon) {\n  char *buffer = mon->outbuf;\n  size_t len = mon->outlen;\n  int rc = write_all(mon->fd, buffer, len);\n  if (rc < 0) {\n    return rc;\n  }\n  mon->outlen = 0;\n  return 0;\n}\n"),
    ("c-max", "c", "int max_of(const int *v, int n) {\n  int best = v[0];\n  int k;\n  for (k = 1; k < n; k++) {\n    if (v[k] > best) best = v[k];\n  }\n  return best;\n}\n"),
    ("c-copy", "c", "void copy(char *dst, const char *src, size_t n) {\n  size_t pos = 0;\n  while (pos < n && src[pos]) {\n    dst[pos] = src[pos];\n    pos++;\n  }\n  dst[pos] = 0;\n}\n"),
    ("c-noloc", "c", "int add(int a, int b) { return a + b; }\n"),
    ("py-mean", "python", "def mean(values):\n    count = 0\n    acc = 0.0\n    for item in values:\n        acc += item\n        count += 1\n    return acc / count if count else 0.0\n"),
    ("py-parse", "python", "def parse(line):\n    parts = line.split(',')\n    key = parts[0].strip()\n    value = int(parts[1])\n    return key, value\n"),
    ("py-find", "python", "def find(xs, target):\n    lo = 0\n    hi = len(xs) - 1\n    while lo <= hi:\n        mid = (lo + hi) // 2\n        if xs[mid] < target:\n            lo = mid + 1\n        else:\n            hi = mid - 1\n    return lo\n"),
    ("java-count", "java", "class Counter {\n  int count(String s, char c) {\n    int hits = 0;\n    for (int j = 0; j < s.length(); j++) {\n      if (s.charAt(j) == c) hits++;\n    }\n    return hits;\n  }\n}\n"),
    ("java-join", "java", "class Joiner {\n  String join(String[] parts) {\n    StringBuilder sb = new StringBuilder();\n    String sep = \"\";\n    for (String part : parts) {\n      sb.append(sep).append(part);\n      sep = \",\";\n    }\n    return sb.toString();\n  }\n}\n"),
    ("java-mislabeled", "java", "class Abs {\n  int abs(int v) {\n    int out = v < 0 ? -v : v;\n    return out;\n  }\n}\n"),
]

PAIRS = [
    ("c-clone", "c", "int twice(int v) {\n  int doubled = v * 2;\n  return doubled;\n}\n", "int dbl(int v) { return v + v; }\n"),
]


def main(path):
    with open(path, "w") as out:
        for ident, lang, code in ITEMS:
            y = label(code)
            if ident.endswith("mislabeled"):
                y = 1 - y
            out.write(json.dumps({"id": ident, "language": lang, "code": code, "label": y}) + "\n")
        for ident, lang, code, pair in PAIRS:
            out.write(json.dumps({"id": ident, "language": lang, "code": code, "code_pair": pair,
                                  "label": label(code, pair)}) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/sample.jsonl")
