// Corpus files: one instance per line, "n<TAB>u<TAB>v[<TAB>YES|NO]".
// Tuples separate coordinates with ';'. '#' starts a comment.

#ifndef FREEMONO_CORPUS_HPP_
#define FREEMONO_CORPUS_HPP_

#include <cstddef>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "freemono/decider.hpp"
#include "freemono/text.hpp"

namespace freemono {

struct CorpusRecord {
  int rank = 0;
  std::vector<Word> us, vs;
  std::optional<bool> expected;
};

struct CorpusEntry {
  std::size_t line = 0;
  CorpusRecord record;
  bool answer = false;
  bool mismatch = false;
};

struct CorpusError {
  std::size_t line = 0;
  std::string message;
};

struct CorpusReport {
  std::vector<CorpusEntry> entries;
  std::vector<CorpusError> errors;

  std::size_t mismatches() const {
    std::size_t n = 0;
    for (const auto& e : entries) n += e.mismatch;
    return n;
  }
  std::size_t yes_count() const {
    std::size_t n = 0;
    for (const auto& e : entries) n += e.answer;
    return n;
  }
};

namespace corpus_detail {

inline std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto p = s.find(sep, start);
    out.push_back(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
    if (p == std::string_view::npos) return out;
    start = p + 1;
  }
}

}  // namespace corpus_detail

// "a;b;1" -> three words.
inline std::vector<Word> parse_tuple(std::string_view text, int rank) {
  std::vector<Word> out;
  for (auto part : corpus_detail::split(text, ';')) {
    out.push_back(parse_word(corpus_detail::trim(part), rank));
  }
  return out;
}

inline std::string format_tuple(const std::vector<Word>& ws) { return join_words(ws, ";"); }

// nullopt for blank and comment lines. Throws ParseError otherwise.
inline std::optional<CorpusRecord> parse_corpus_line(std::string_view line) {
  using corpus_detail::trim;
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  if (trim(line).empty()) return std::nullopt;
  auto fields = corpus_detail::split(line, '\t');
  while (!fields.empty() && trim(fields.back()).empty()) fields.pop_back();
  if (fields.size() < 3 || fields.size() > 4) {
    throw ParseError("expected 3 or 4 tab-separated fields, got " + std::to_string(fields.size()));
  }
  CorpusRecord r;
  std::string n(trim(fields[0]));
  std::size_t used = 0;
  try {
    r.rank = std::stoi(n, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != n.size() || n.empty() || r.rank < 1 || r.rank > kMaxTextRank) {
    throw ParseError("bad rank \"" + n + "\"");
  }
  r.us = parse_tuple(trim(fields[1]), r.rank);
  r.vs = parse_tuple(trim(fields[2]), r.rank);
  if (r.us.size() != r.vs.size()) throw ParseError("tuple arities differ");
  if (fields.size() == 4) {
    auto e = trim(fields[3]);
    if (e == "YES") r.expected = true;
    else if (e == "NO") r.expected = false;
    else if (e != "-" && !e.empty()) throw ParseError("expected answer must be YES or NO");
  }
  return r;
}

inline CorpusReport run_corpus(std::istream& in, Strategy s = Strategy::kTestSub) {
  CorpusReport rep;
  std::map<int, Decider> deciders;
  std::string line;
  for (std::size_t no = 1; std::getline(in, line); ++no) {
    std::optional<CorpusRecord> rec;
    try {
      rec = parse_corpus_line(line);
    } catch (const ParseError& e) {
      rep.errors.push_back({no, e.what()});
      continue;
    }
    if (!rec) continue;
    auto it = deciders.try_emplace(rec->rank, rec->rank).first;
    CorpusEntry e;
    e.line = no;
    e.answer = it->second.decide_multi(rec->us, rec->vs, s).yes;
    e.mismatch = rec->expected && *rec->expected != e.answer;
    e.record = std::move(*rec);
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

inline CorpusReport run_corpus(const std::string& path, Strategy s = Strategy::kTestSub) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus " + path);
  return run_corpus(in, s);
}

}  // namespace freemono

#endif  // FREEMONO_CORPUS_HPP_
