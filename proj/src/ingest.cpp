#include "causal/ingest.hpp"

#include <algorithm>
#include <filesystem>

#include <json.hpp>

#include "causal/text.hpp"

namespace causal {

namespace {

bool is_entity_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

// One left-to-right pass deleting every "&name;" / "&#123;" occurrence.
bool remove_entities_once(std::string& s) {
  std::string out;
  out.reserve(s.size());
  bool changed = false;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '&') {
      std::size_t j = i + 1;
      if (j < s.size() && s[j] == '#') ++j;
      std::size_t name_start = j;
      while (j < s.size() && is_entity_char(s[j])) ++j;
      if (j > name_start && j < s.size() && s[j] == ';') {
        i = j + 1;
        changed = true;
        continue;
      }
    }
    out.push_back(s[i]);
    ++i;
  }
  s.swap(out);
  return changed;
}

bool is_twitter_construct(const std::string& token) {
  if (token.empty()) return false;
  if (token.front() == '@' || token.front() == '#') return true;
  return text::starts_with_icase_ascii(token, "http://") ||
         text::starts_with_icase_ascii(token, "https://") ||
         text::starts_with_icase_ascii(token, "www.");
}

}  // namespace

Document preprocess(const RawDocument& raw, PreprocessOptions options) {
  std::string body = raw.text;
  while (remove_entities_once(body)) {
  }

  Document doc;
  doc.id = raw.id;
  doc.timestamp = raw.timestamp;
  for (auto& token : text::split_whitespace(body)) {
    if (is_twitter_construct(token)) continue;
    std::string kept = options.keep_punctuation ? std::move(token) : text::strip_punctuation(token);
    if (kept.empty()) continue;
    std::string lower = text::to_lower(kept);
    doc.tokens_cased.push_back(options.keep_casing ? std::move(kept) : lower);
    doc.tokens_lower.push_back(std::move(lower));
  }
  return doc;
}

StopwordTable::StopwordTable(std::map<std::string, std::unordered_set<std::string>> sets)
    : sets_(std::move(sets)) {
  if (!sets_.contains("english")) throw DataError("stopword table has no 'english' set");
  for (const auto& [lang, words] : sets_) {
    if (words.empty()) throw DataError("stopword set '" + lang + "' is empty");
  }
}

StopwordTable StopwordTable::load_directory(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw DataError("stopword directory not found: " + dir);
  std::map<std::string, std::unordered_set<std::string>> sets;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string lang = entry.path().filename().string();
    if (lang.empty() || lang.front() == '.') continue;
    std::ifstream in(entry.path());
    if (!in) throw DataError("cannot read stopword file " + entry.path().string());
    auto& words = sets[lang];
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      for (auto& w : text::split_whitespace(line)) words.insert(text::to_lower(w));
    }
  }
  return StopwordTable(std::move(sets));
}

std::size_t StopwordTable::matches(const std::vector<std::string>& tokens_lower,
                                   const std::string& language) const {
  auto it = sets_.find(language);
  if (it == sets_.end()) return 0;
  return static_cast<std::size_t>(std::count_if(tokens_lower.begin(), tokens_lower.end(),
                                                [&](const auto& t) { return it->second.contains(t); }));
}

bool declares_english(const std::string& declared_lang) {
  const std::string lang = text::to_lower(declared_lang);
  return lang == "english" || lang == "en" || lang.starts_with("en-") || lang.starts_with("en_");
}

bool language_gate(const Document& doc, const std::string& declared_lang, const StopwordTable& table) {
  if (!table.sets().contains("english")) throw std::invalid_argument("stopword table lacks english");
  if (!declares_english(declared_lang) || doc.tokens_lower.empty()) return false;
  const std::size_t english = table.matches(doc.tokens_lower, "english");
  if (english == 0) return false;
  for (const auto& [lang, words] : table.sets()) {
    if (lang == "english") continue;
    if (table.matches(doc.tokens_lower, lang) >= english) return false;
  }
  return true;
}

RawDocument raw_document_from_json_line(const std::string& line) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(line);
    RawDocument raw;
    raw.id = j.at("id").get<std::string>();
    raw.text = j.at("text").get<std::string>();
    raw.timestamp = parse_timestamp(j.at("timestamp").get<std::string>());
    raw.declared_lang = j.at("lang").get<std::string>();
    if (raw.id.empty()) throw DataError("empty id");
    return raw;
  } catch (const json::exception& e) {
    throw DataError(e.what());
  }
}

std::string to_ndjson_line(const RawDocument& raw) {
  nlohmann::json j = {{"id", raw.id},
                      {"text", raw.text},
                      {"timestamp", format_timestamp(raw.timestamp)},
                      {"lang", raw.declared_lang}};
  return j.dump();
}

RawDocumentReader::RawDocumentReader(const std::string& path) : in_(path, std::ios::binary) {
  if (!in_) throw DataError("cannot read input file " + path);
}

std::optional<RawDocument> RawDocumentReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++lines_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    RawDocument raw;
    try {
      raw = raw_document_from_json_line(line);
    } catch (const DataError&) {
      ++malformed_;
      continue;
    }
    if (!seen_.insert(raw.id).second) {
      ++duplicates_;
      continue;
    }
    return raw;
  }
  return std::nullopt;
}

LoadResult load_ndjson(const std::string& path) {
  RawDocumentReader reader(path);
  LoadResult result;
  while (auto raw = reader.next()) result.documents.push_back(std::move(*raw));
  result.malformed = reader.malformed();
  result.duplicates = reader.duplicates();
  return result;
}

IngestResult ingest(const std::vector<RawDocument>& raw, const StopwordTable& stopwords,
                    const IngestOptions& options) {
  IngestResult result;
  result.input = raw.size();
  enum class Fate { Kept, Excluded, Rejected };
  std::vector<Fate> fate(raw.size(), Fate::Kept);
  std::vector<Document> docs(raw.size());
  for_each_shard(raw.size(), options.threads, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t i = begin; i < end; ++i) {
      if (options.exclude && options.exclude(raw[i])) {
        fate[i] = Fate::Excluded;
        continue;
      }
      docs[i] = preprocess(raw[i], options.preprocess);
      if (!language_gate(docs[i], raw[i].declared_lang, stopwords)) fate[i] = Fate::Rejected;
    }
  });
  for (std::size_t i = 0; i < raw.size(); ++i) {
    switch (fate[i]) {
      case Fate::Kept: result.documents.push_back(std::move(docs[i])); break;
      case Fate::Excluded: ++result.excluded; break;
      case Fate::Rejected: ++result.language_rejected; break;
    }
  }
  return result;
}

}  // namespace causal
