#pragma once

// Synthetic corpora shared by the unit and acceptance suites. Everything is
// generated from a fixed seed with std::mt19937_64 and plain modulo draws so
// fixtures do not depend on the library's own sampling helpers.

#include <array>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "causal/document.hpp"
#include "causal/tagger.hpp"
#include "causal/text.hpp"

namespace fixtures {

using Gen = std::mt19937_64;

inline std::size_t pick(Gen& g, std::size_t n) { return static_cast<std::size_t>(g() % n); }

template <typename T, std::size_t N>
const T& pick(Gen& g, const std::array<T, N>& items) {
  return items[pick(g, N)];
}

inline bool chance(Gen& g, double p) { return static_cast<double>(g() >> 11) * 0x1.0p-53 < p; }

// ---------------------------------------------------------------------------
// A tiny English grammar with gold Penn tags.

struct Word {
  const char* text;
  const char* tag;
};

inline const std::array<Word, 5> kDet{{{"the", "DT"}, {"a", "DT"}, {"this", "DT"}, {"that", "DT"}, {"every", "DT"}}};
inline const std::array<Word, 10> kAdj{{{"huge", "JJ"}, {"small", "JJ"}, {"bad", "JJ"}, {"good", "JJ"},
                                        {"terrible", "JJ"}, {"happy", "JJ"}, {"sad", "JJ"}, {"new", "JJ"},
                                        {"old", "JJ"}, {"strange", "JJ"}}};
inline const std::array<Word, 16> kNoun{{{"storm", "NN"}, {"rain", "NN"}, {"traffic", "NN"}, {"delay", "NN"},
                                         {"accident", "NN"}, {"problem", "NN"}, {"headache", "NN"}, {"game", "NN"},
                                         {"party", "NN"}, {"coffee", "NN"}, {"phone", "NN"}, {"weather", "NN"},
                                         {"team", "NN"}, {"virus", "NN"}, {"fire", "NN"}, {"stress", "NN"}}};
inline const std::array<Word, 8> kPlural{{{"storms", "NNS"}, {"delays", "NNS"}, {"problems", "NNS"},
                                          {"headaches", "NNS"}, {"games", "NNS"}, {"people", "NNS"},
                                          {"kids", "NNS"}, {"cars", "NNS"}}};
inline const std::array<Word, 7> kPast{{{"ruined", "VBD"}, {"made", "VBD"}, {"broke", "VBD"}, {"stopped", "VBD"},
                                        {"loved", "VBD"}, {"hated", "VBD"}, {"saw", "VBD"}}};
inline const std::array<Word, 6> kPres{{{"ruins", "VBZ"}, {"makes", "VBZ"}, {"breaks", "VBZ"}, {"stops", "VBZ"},
                                        {"loves", "VBZ"}, {"hates", "VBZ"}}};
inline const std::array<Word, 5> kBase{{{"ruin", "VB"}, {"make", "VB"}, {"stop", "VB"}, {"love", "VB"}, {"hate", "VB"}}};
inline const std::array<Word, 3> kGerund{{{"making", "VBG"}, {"ruining", "VBG"}, {"stopping", "VBG"}}};
inline const std::array<Word, 6> kPron{{{"I", "PRP"}, {"we", "PRP"}, {"they", "PRP"}, {"he", "PRP"},
                                        {"she", "PRP"}, {"it", "PRP"}}};
inline const std::array<Word, 6> kAdv{{{"really", "RB"}, {"so", "RB"}, {"very", "RB"}, {"just", "RB"},
                                       {"never", "RB"}, {"always", "RB"}}};
inline const std::array<Word, 6> kPrep{{{"in", "IN"}, {"on", "IN"}, {"at", "IN"}, {"after", "IN"},
                                        {"before", "IN"}, {"with", "IN"}}};
inline const std::array<Word, 3> kModal{{{"will", "MD"}, {"can", "MD"}, {"might", "MD"}}};

struct Entity {
  std::vector<const char*> words;
  const char* ne;
};

inline const std::array<Entity, 6> kEntities{{{{"Obama"}, "Person"},
                                              {{"London"}, "Location"},
                                              {{"Texas"}, "Location"},
                                              {{"Google"}, "Organization"},
                                              {{"New", "York", "Times"}, "Organization"},
                                              {{"Olympics"}, "Misc"}}};

/// Tokens with gold POS and NE tags.
struct Sentence {
  std::vector<std::string> tokens;
  std::vector<std::string> pos;
  std::vector<std::string> ne;

  void add(const Word& w) { add(w.text, w.tag); }
  void add(const std::string& token, const std::string& tag, const std::string& ne_tag = "O") {
    tokens.push_back(token);
    pos.push_back(tag);
    ne.push_back(ne_tag);
  }
  void append(const Sentence& other) {
    tokens.insert(tokens.end(), other.tokens.begin(), other.tokens.end());
    pos.insert(pos.end(), other.pos.begin(), other.pos.end());
    ne.insert(ne.end(), other.ne.begin(), other.ne.end());
  }
};

inline void noun_phrase(Gen& g, Sentence& s) {
  const std::size_t kind = pick(g, 5);
  if (kind == 0) {
    const auto& e = kEntities[pick(g, kEntities.size())];
    for (const char* w : e.words) s.add(w, "NNP", e.ne);
    return;
  }
  if (kind == 1) {
    s.add(pick(g, kPlural));
    return;
  }
  s.add(pick(g, kDet));
  if (chance(g, 0.5)) s.add(pick(g, kAdj));
  s.add(pick(g, kNoun));
}

/// One clause from a handful of templates. `cause` (if nonempty) forces a
/// "NP <cause-word> NP" clause.
inline Sentence clause(Gen& g, const std::string& cause = "") {
  Sentence s;
  if (!cause.empty()) {
    noun_phrase(g, s);
    if (cause == "causing") {
      s.add("is", "VBZ");
      s.add("causing", "VBG");
    } else if (cause == "causes") {
      s.add("causes", "VBZ");
    } else {
      s.add(cause, "VBD");
    }
    noun_phrase(g, s);
    if (chance(g, 0.3)) {
      s.add(pick(g, kPrep));
      noun_phrase(g, s);
    }
    return s;
  }
  switch (pick(g, 6)) {
    case 0:
      noun_phrase(g, s);
      s.add(pick(g, kPast));
      noun_phrase(g, s);
      break;
    case 1:
      s.add(pick(g, kPron));
      s.add(pick(g, kPast));
      noun_phrase(g, s);
      if (chance(g, 0.5)) s.add(pick(g, kAdv));
      break;
    case 2:
      noun_phrase(g, s);
      s.add(pick(g, kPres));
      noun_phrase(g, s);
      s.add(pick(g, kPrep));
      noun_phrase(g, s);
      break;
    case 3:
      s.add(pick(g, kPron));
      s.add(pick(g, kModal));
      s.add(pick(g, kBase));
      noun_phrase(g, s);
      break;
    case 4:
      noun_phrase(g, s);
      s.add("is", "VBZ");
      s.add(pick(g, kGerund));
      noun_phrase(g, s);
      break;
    default:
      s.add(pick(g, kPron));
      s.add(pick(g, kAdv));
      s.add(pick(g, kPast));
      noun_phrase(g, s);
      s.add("and", "CC");
      noun_phrase(g, s);
      break;
  }
  return s;
}

/// Gold-tagged sentences drawn from the grammar, including cause-word clauses.
inline std::vector<causal::TaggedSentence> toy_treebank(std::size_t n = 50, std::uint64_t seed = 7) {
  Gen g(seed);
  static const std::array<std::string, 3> causes{"caused", "causes", "causing"};
  std::vector<causal::TaggedSentence> out;
  for (std::size_t i = 0; i < n; ++i) {
    Sentence s = clause(g, i % 4 == 0 ? causes[pick(g, 3)] : "");
    out.push_back({s.tokens, s.pos});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Selection stream with planted labels.

enum class Planted { Causal, ControlEligible, Excluded };

struct PlantedDoc {
  causal::Document doc;
  Planted label;
};

/// `n` documents spread over `hours` hours of 2013-05-01 with planted
/// cause-words and bidirectional words.
inline std::vector<PlantedDoc> selection_stream(std::size_t n, std::uint64_t seed, int hours = 24) {
  static const std::array<std::string, 12> filler{"the", "storm", "we", "rain", "delay", "party",
                                                  "phone", "late", "good", "bad", "cause", "because"};
  static const std::array<std::string, 3> causes{"caused", "causes", "causing"};
  static const std::array<std::string, 8> bidir{"associated", "related", "connects", "correlation",
                                                "relative", "association", "connected", "correlates"};
  Gen g(seed);
  std::vector<PlantedDoc> out;
  const std::int64_t base = 1367366400;  // 2013-05-01T00:00:00Z
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> tokens;
    const std::size_t len = 3 + pick(g, 10);
    for (std::size_t k = 0; k < len; ++k) tokens.push_back(filler[pick(g, filler.size())]);
    const double r = static_cast<double>(g() % 1000) / 1000.0;
    Planted label;
    std::vector<std::string> extra;
    if (r < 0.25) {
      label = Planted::Causal;
      extra.push_back(causes[pick(g, 3)]);
    } else if (r < 0.85) {
      label = Planted::ControlEligible;
    } else if (r < 0.92) {
      label = Planted::Excluded;
      extra.push_back(causes[pick(g, 3)]);
      extra.push_back(causes[pick(g, 3)]);
    } else {
      label = Planted::Excluded;
      extra.push_back(bidir[pick(g, bidir.size())]);
      if (chance(g, 0.5)) extra.push_back(causes[pick(g, 3)]);
    }
    for (auto& e : extra) tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(pick(g, tokens.size() + 1)), e);
    causal::Document d;
    d.id = "d" + std::to_string(100000 + i);
    d.timestamp = base + static_cast<std::int64_t>(g() % (static_cast<std::uint64_t>(hours) * 3600));
    for (auto& t : tokens) {
      // Random capitalization exercises the lowercase path.
      std::string cased = t;
      if (chance(g, 0.2)) cased[0] = static_cast<char>(cased[0] - 'a' + 'A');
      d.tokens_cased.push_back(cased);
      d.tokens_lower.push_back(t);
    }
    out.push_back({std::move(d), label});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Full-study fixture written to disk.

struct StudyFiles {
  std::string dir;
  std::string input;
  std::string stopwords;
  std::string lexicon;
  std::string annotations;
  std::string labels;
  std::string treebank;
};

inline std::string decorate(Gen& g, const std::string& token) {
  static const std::array<const char*, 4> tails{"!", ",", "...", "?"};
  std::string t = token;
  if (chance(g, 0.08)) t += tails[pick(g, tails.size())];
  if (chance(g, 0.03)) t = "\"" + t + "\"";
  return t;
}

/// Writes raw posts, stopword lists, lexicon, NE annotations, sentiment
/// labels and a treebank under `dir`.
inline StudyFiles write_study_fixture(const std::string& dir, std::size_t n_docs, std::uint64_t seed = 2013) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  StudyFiles files;
  files.dir = dir;
  files.input = dir + "/posts.ndjson";
  files.stopwords = dir + "/stopwords";
  files.lexicon = dir + "/lexicon.tsv";
  files.annotations = dir + "/ne.tsv";
  files.labels = dir + "/labels.tsv";
  files.treebank = dir + "/treebank.txt";

  fs::create_directories(files.stopwords);
  std::ofstream(files.stopwords + "/english")
      << "the\na\nthis\nthat\ni\nwe\nthey\nhe\nshe\nit\nin\non\nat\nof\nand\nbut\nwith\nis\nwill\ncan\nso\nvery\n"
         "just\nafter\nbefore\n";
  std::ofstream(files.stopwords + "/french") << "le\nla\nles\nde\net\nun\nune\nje\nnous\nest\nsur\n";

  {
    std::ofstream lex(files.lexicon);
    lex << "word\thappiness_average\n";
    const std::vector<std::pair<const char*, double>> scores{
        {"storm", 3.2},     {"storms", 3.1},  {"rain", 4.5},     {"traffic", 3.0},  {"delay", 3.1},
        {"delays", 3.0},    {"accident", 2.5}, {"problem", 2.9},  {"problems", 2.8}, {"headache", 2.6},
        {"headaches", 2.5}, {"game", 6.8},    {"games", 6.9},    {"party", 7.4},    {"coffee", 7.0},
        {"phone", 6.0},     {"weather", 5.6}, {"team", 6.4},     {"virus", 2.2},    {"fire", 3.4},
        {"stress", 2.7},    {"people", 6.2},  {"kids", 6.9},     {"cars", 5.6},     {"huge", 5.8},
        {"small", 5.0},     {"bad", 2.8},     {"good", 7.5},     {"terrible", 2.0}, {"happy", 8.3},
        {"sad", 2.4},       {"new", 6.8},     {"old", 4.0},      {"strange", 4.5},  {"ruined", 2.5},
        {"made", 5.6},      {"broke", 3.0},   {"stopped", 4.0},  {"loved", 8.4},    {"hated", 2.3},
        {"saw", 5.6},       {"ruins", 3.6},   {"makes", 5.7},    {"breaks", 4.2},   {"stops", 4.3},
        {"loves", 8.3},     {"hates", 2.3},   {"love", 8.4},     {"hate", 2.3},     {"the", 4.98},
        {"a", 5.24},        {"caused", 4.2},  {"causes", 4.3},   {"causing", 4.1},  {"really", 5.9},
        {"never", 3.3},     {"always", 5.9},  {"making", 6.0},   {"ruining", 2.7},  {"is", 5.2}};
    for (const auto& [w, s] : scores) lex << w << '\t' << s << '\n';
  }

  Gen g(seed);
  static const std::array<std::string, 3> causes{"caused", "causes", "causing"};
  static const std::array<std::string, 4> hashtags{"#fail", "#mondays", "#love", "#news"};
  static const std::array<std::string, 4> bidir_words{"related", "associated", "connected", "correlation"};
  static const std::array<std::string, 4> classes{"very negative", "negative", "neutral", "positive"};
  std::ofstream posts(files.input, std::ios::binary);
  std::ofstream ne(files.annotations, std::ios::binary);
  std::ofstream labels(files.labels, std::ios::binary);
  const std::int64_t base = 1367366400;

  for (std::size_t i = 0; i < n_docs; ++i) {
    const std::string id = "t" + std::to_string(500000 + i);
    const std::int64_t ts = base + static_cast<std::int64_t>(g() % (12 * 3600));
    const double r = static_cast<double>(g() % 1000) / 1000.0;
    std::string lang = "en";
    std::string text;
    Sentence s;
    if (r < 0.03) {
      lang = chance(g, 0.5) ? "fr" : "en";
      text = "le chat est sur la table et je mange une pomme";
    } else {
      std::string cause;
      if (r < 0.35) cause = causes[pick(g, 3)];
      s = clause(g, cause);
      if (chance(g, 0.4)) {
        s.add("and", "CC");
        s.append(clause(g));
      }
      if (r >= 0.35 && r < 0.40) {
        // Excluded: a second cause-word or a bidirectional word.
        if (chance(g, 0.5)) {
          s.append(clause(g, causes[pick(g, 3)]));
        } else {
          s.add(bidir_words[pick(g, bidir_words.size())], "VBN");
        }
      }
      std::vector<std::string> pieces;
      if (chance(g, 0.2)) pieces.push_back("@user" + std::to_string(pick(g, 50)));
      for (std::size_t k = 0; k < s.tokens.size(); ++k) {
        std::string t = s.tokens[k];
        if (k == 0 && chance(g, 0.5) && t[0] >= 'a' && t[0] <= 'z') t[0] = static_cast<char>(t[0] - 'a' + 'A');
        pieces.push_back(decorate(g, t));
        if (chance(g, 0.03)) pieces.push_back("&amp;");
      }
      if (chance(g, 0.25)) pieces.push_back(hashtags[pick(g, hashtags.size())]);
      if (chance(g, 0.15)) pieces.push_back("http://t.co/x" + std::to_string(pick(g, 100)));
      for (std::size_t k = 0; k < pieces.size(); ++k) text += (k ? " " : "") + pieces[k];
    }
    nlohmann::json line = {{"id", id}, {"text", text}, {"timestamp", ""}, {"lang", lang}};
    {
      std::time_t t = static_cast<std::time_t>(ts);
      char buf[32];
      std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
      line["timestamp"] = buf;
    }
    posts << line.dump() << '\n';
    if (i % 97 == 13) posts << "{not valid json\n";
    if (!s.tokens.empty() && chance(g, 0.8)) {
      ne << id << "\tne\t";
      for (std::size_t k = 0; k < s.ne.size(); ++k) ne << (k ? " " : "") << s.ne[k];
      ne << '\n';
    }
    if (chance(g, 0.9)) {
      std::size_t cls = pick(g, 4);
      if (!s.tokens.empty() && s.tokens.size() > 1 && chance(g, 0.1)) cls = 4;
      labels << id << '\t' << (cls == 4 ? std::string("very positive") : classes[cls]) << '\n';
    }
  }

  std::ofstream tb(files.treebank, std::ios::binary);
  for (const auto& sentence : toy_treebank(300, seed + 1)) {
    for (std::size_t k = 0; k < sentence.tokens.size(); ++k) {
      tb << (k ? " " : "") << sentence.tokens[k] << '/' << sentence.tags[k];
    }
    tb << '\n';
  }
  return files;
}

/// Every file a full run with all optional inputs is expected to write.
inline std::vector<std::string> declared_artifacts() {
  std::vector<std::string> files{"manifest.json",  "timings.log",      "documents.ndjson",     "causal.ndjson",
                                 "control.ndjson", "bins.tsv",         "tagger_model.json",    "annotate_report.tsv",
                                 "tfidf_causal.tsv", "tfidf_control.tsv", "causetree_rates.tsv", "sentiment_summary.tsv",
                                 "doc_classes.tsv", "lda_topwords.tsv", "lda_theta.tsv",        "lda_meta.json",
                                 "variants.tsv",   "variants_odds.tsv"};
  for (const char* kind : {"unigram", "pos", "ne"}) {
    for (const char* side : {"causal", "control"}) files.push_back(std::string("freq_") + kind + "_" + side + ".tsv");
    files.push_back(std::string("odds_") + kind + ".tsv");
    files.push_back(std::string("forest_") + kind + ".tsv");
  }
  for (const char* root : {"caused", "causes", "causing"}) {
    for (const char* dir : {"forward", "backward"}) {
      files.push_back(std::string("causetree_") + root + "_" + dir + ".json");
    }
  }
  for (const char* side : {"causal", "control"}) {
    files.push_back(std::string("sentiment_hist_") + side + ".tsv");
    for (const char* pc : {"noun", "verb", "adjective"}) {
      files.push_back(std::string("sentiment_hist_") + side + "_" + pc + ".tsv");
    }
  }
  return files;
}

}  // namespace fixtures
