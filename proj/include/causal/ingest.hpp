#pragma once

#include <cstddef>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "causal/document.hpp"

namespace causal {

struct PreprocessOptions {
  bool keep_punctuation = false;
  bool keep_casing = true;
};

/// Turns raw post text into whitespace unigrams:
///   1. XML character entities (&name; / &#123;) are deleted, repeatedly
///   2. whitespace tokens starting with '@', '#', "http://", "https://" or "www." are dropped
///   3. unless keep_punctuation, every Unicode P* code point is deleted
///   4. the remainder is split on whitespace
///   5. tokens_lower is the lowercase of tokens_cased (and tokens_cased is
///      lowercased too when keep_casing is false)
Document preprocess(const RawDocument& raw, PreprocessOptions options = {});

/// Stopword sets keyed by language name ("english", "french", ...).
class StopwordTable {
 public:
  StopwordTable() = default;
  explicit StopwordTable(std::map<std::string, std::unordered_set<std::string>> sets);

  /// One file per language, one word per line; the file name is the language.
  static StopwordTable load_directory(const std::string& dir);

  const std::map<std::string, std::unordered_set<std::string>>& sets() const { return sets_; }

  /// Occurrences (with multiplicity) of tokens from `language`'s set.
  std::size_t matches(const std::vector<std::string>& tokens_lower, const std::string& language) const;

 private:
  std::map<std::string, std::unordered_set<std::string>> sets_;
};

/// "english", "en", "en-US", "en_GB" (any case) all declare English.
bool declares_english(const std::string& declared_lang);

/// Accepts iff the post declares English and its tokens match strictly more
/// English stopwords than those of any other language in the table.
bool language_gate(const Document& doc, const std::string& declared_lang, const StopwordTable& table);

/// Sequential NDJSON reader for raw posts (keys id, text, timestamp, lang).
/// Malformed lines and repeated ids are skipped and counted.
class RawDocumentReader {
 public:
  explicit RawDocumentReader(const std::string& path);

  std::optional<RawDocument> next();

  std::size_t malformed() const { return malformed_; }
  std::size_t duplicates() const { return duplicates_; }
  std::size_t lines_read() const { return lines_; }

 private:
  std::ifstream in_;
  std::unordered_set<std::string> seen_;
  std::size_t malformed_ = 0;
  std::size_t duplicates_ = 0;
  std::size_t lines_ = 0;
};

struct LoadResult {
  std::vector<RawDocument> documents;
  std::size_t malformed = 0;
  std::size_t duplicates = 0;
};

LoadResult load_ndjson(const std::string& path);

/// Parses one raw NDJSON line; throws DataError when malformed.
RawDocument raw_document_from_json_line(const std::string& line);
std::string to_ndjson_line(const RawDocument& raw);

struct IngestOptions {
  PreprocessOptions preprocess;
  /// Optional hook for dropping posts before preprocessing (e.g. retweets
  /// identified by metadata). No heuristic is installed by default.
  std::function<bool(const RawDocument&)> exclude;
  std::size_t threads = 1;
};

struct IngestResult {
  Corpus documents;
  std::size_t input = 0;
  std::size_t excluded = 0;
  std::size_t language_rejected = 0;
};

/// Preprocesses and language-gates every post, preserving input order.
IngestResult ingest(const std::vector<RawDocument>& raw, const StopwordTable& stopwords,
                    const IngestOptions& options = {});

}  // namespace causal
