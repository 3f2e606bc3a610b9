#include "causal/document.hpp"

#include <fstream>
#include <ostream>

#include <json.hpp>

#include "causal/text.hpp"

namespace causal {

using nlohmann::json;

void validate(const Document& doc) {
  if (doc.id.empty()) throw DataError("document with empty id");
  if (doc.tokens_cased.size() != doc.tokens_lower.size()) {
    throw DataError("document " + doc.id + ": cased/lowercase token lists differ in length");
  }
  for (std::size_t i = 0; i < doc.tokens_cased.size(); ++i) {
    if (text::to_lower(doc.tokens_cased[i]) != doc.tokens_lower[i]) {
      throw DataError("document " + doc.id + ": token " + std::to_string(i) +
                      " lowercase form does not match");
    }
  }
  if (doc.pos_tags && doc.pos_tags->size() != doc.size()) {
    throw DataError("document " + doc.id + ": pos_tags not parallel to tokens");
  }
  if (doc.ne_tags && doc.ne_tags->size() != doc.size()) {
    throw DataError("document " + doc.id + ": ne_tags not parallel to tokens");
  }
}

std::string to_ndjson_line(const Document& doc) {
  json j = json::object();
  j["id"] = doc.id;
  j["timestamp"] = format_timestamp(doc.timestamp);
  j["tokens_cased"] = doc.tokens_cased;
  j["tokens_lower"] = doc.tokens_lower;
  if (doc.pos_tags) j["pos_tags"] = *doc.pos_tags;
  if (doc.ne_tags) j["ne_tags"] = *doc.ne_tags;
  return j.dump();
}

Document document_from_json_line(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed document line: ") + e.what());
  }
  try {
    Document doc;
    doc.id = j.at("id").get<std::string>();
    doc.timestamp = parse_timestamp(j.at("timestamp").get<std::string>());
    doc.tokens_lower = j.at("tokens_lower").get<std::vector<std::string>>();
    if (j.contains("tokens_cased")) {
      doc.tokens_cased = j.at("tokens_cased").get<std::vector<std::string>>();
    } else {
      doc.tokens_cased = doc.tokens_lower;
    }
    if (j.contains("pos_tags")) doc.pos_tags = j.at("pos_tags").get<std::vector<std::string>>();
    if (j.contains("ne_tags")) doc.ne_tags = j.at("ne_tags").get<std::vector<std::string>>();
    validate(doc);
    return doc;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed document line: ") + e.what());
  }
}

void write_documents(std::ostream& out, const Corpus& corpus) {
  for (const auto& doc : corpus) out << to_ndjson_line(doc) << '\n';
}

void write_documents(const std::string& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  write_documents(out, corpus);
}

Corpus read_documents(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path);
  Corpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      corpus.push_back(document_from_json_line(line));
    } catch (const DataError& e) {
      throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return corpus;
}

}  // namespace causal
