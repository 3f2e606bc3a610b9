#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "causal/common.hpp"

namespace causal {

struct RawDocument {
  std::string id;
  std::string text;
  Timestamp timestamp = 0;
  std::string declared_lang;
};

/// A preprocessed post. tokens_cased and tokens_lower are parallel, and any
/// attached tag list is parallel to them.
struct Document {
  std::string id;
  Timestamp timestamp = 0;
  std::vector<std::string> tokens_cased;
  std::vector<std::string> tokens_lower;
  std::optional<std::vector<std::string>> pos_tags;
  std::optional<std::vector<std::string>> ne_tags;

  std::size_t size() const { return tokens_lower.size(); }
};

using Corpus = std::vector<Document>;

/// Throws DataError describing the first violated invariant.
void validate(const Document& doc);

// Document NDJSON: one object per line with keys id, timestamp, tokens_cased,
// tokens_lower and optionally pos_tags / ne_tags.
std::string to_ndjson_line(const Document& doc);
Document document_from_json_line(const std::string& line);

void write_documents(std::ostream& out, const Corpus& corpus);
void write_documents(const std::string& path, const Corpus& corpus);
Corpus read_documents(const std::string& path);

}  // namespace causal
