#include "causal/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "causal/causetree.hpp"
#include "causal/common.hpp"
#include "causal/ingest.hpp"
#include "causal/lda.hpp"
#include "causal/select.hpp"
#include "causal/sentiment.hpp"
#include "causal/stats.hpp"
#include "causal/tagger.hpp"
#include "causal/text.hpp"
#include "causal/variants.hpp"

namespace causal {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& items, const std::string& sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

}  // namespace

std::vector<std::pair<std::string, std::string>> PipelineConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> kv{
      {"annotations", join(annotations)},
      {"bidirectional_stems", join(bidirectional_stems)},
      {"bin_width_seconds", std::to_string(bin_width_seconds)},
      {"candidate_pooling", candidate_pooling},
      {"cause_words", join(cause_words)},
      {"documents", documents},
      {"haldane_correction", bool_str(haldane_correction)},
      {"histogram_bins", std::to_string(histogram_bins)},
      {"input", join(input)},
      {"keep_casing", bool_str(keep_casing)},
      {"keep_punctuation", bool_str(keep_punctuation)},
      {"lda_alpha_sum", format_number(lda_alpha_sum)},
      {"lda_beta", format_number(lda_beta)},
      {"lda_iterations", std::to_string(lda_iterations)},
      {"lda_stopwords", lda_stopwords},
      {"lda_top_words", std::to_string(lda_top_words)},
      {"lda_topics", std::to_string(lda_topics)},
      {"lda_vocab_min_count", std::to_string(lda_vocab_min_count)},
      {"lexicon", lexicon},
      {"ngram_count", ngram_count},
      {"or_alpha", format_number(or_alpha)},
      {"rng_seed", std::to_string(rng_seed)},
      {"sentiment_labels", sentiment_labels},
      {"sentiment_weighting", sentiment_weighting},
      {"stopword_dir", stopword_dir},
      {"tagger_epochs", std::to_string(tagger_epochs)},
      {"tagger_model", tagger_model},
      {"tfidf_percentile", format_number(tfidf_percentile)},
      {"tfidf_top_k", std::to_string(tfidf_top_k)},
      {"tree_branch", std::to_string(tree_branch)},
      {"tree_depth", std::to_string(tree_depth)},
      {"treebank", treebank},
  };
  return kv;
}

std::string PipelineConfig::hash() const {
  std::string canonical;
  for (const auto& [k, v] : echo()) canonical += k + "=" + v + "\n";
  return to_hex(fnv1a64(canonical));
}

const std::vector<std::string>& subcommand_names() {
  static const std::vector<std::string> names{"ingest", "select",    "tag-train",   "tag",   "annotate",
                                              "freq",   "tfidf",     "odds",        "causetree",
                                              "sentiment", "doc-classes", "lda", "variants", "report-all"};
  return names;
}

namespace {

// ---------------------------------------------------------------------------
// Run context: configuration, manifest and output helpers

class Run {
 public:
  Run(const PipelineConfig& cfg, std::string subcommand)
      : cfg_(cfg), subcommand_(std::move(subcommand)), hash_(cfg.hash()) {}

  const PipelineConfig& cfg() const { return cfg_; }
  const std::string& subcommand() const { return subcommand_; }

  std::string out(const std::string& name) const { return (fs::path(cfg_.output_dir) / name).string(); }

  void open_manifest(bool fresh) {
    fs::create_directories(cfg_.output_dir);
    manifest_ = json::object();
    if (!fresh && fs::exists(out("manifest.json"))) {
      std::ifstream in(out("manifest.json"));
      try {
        manifest_ = json::parse(in);
      } catch (const json::exception&) {
        manifest_ = json::object();
      }
    }
    if (fresh) {
      std::ofstream(out("timings.log"), std::ios::trunc);
    }
    manifest_["metadata"] = metadata();
    json config = json::object();
    for (const auto& [k, v] : cfg_.echo()) config[k] = v;
    manifest_["config"] = config;
    manifest_["tool_version"] = kToolVersion;
    if (!manifest_.contains("stages")) manifest_["stages"] = json::object();
  }

  json metadata() const {
    return {{"producer", kToolName},
            {"subcommand", subcommand_},
            {"config_hash", hash_},
            {"rng_seed", cfg_.rng_seed}};
  }

  json& stage(const std::string& name) {
    auto& s = manifest_["stages"][name];
    if (!s.is_object()) s = json::object();
    s["warnings"] = json::array();
    return s;
  }

  void warn(const std::string& stage_name, const std::string& message) {
    manifest_["stages"][stage_name]["warnings"].push_back(message);
    std::cerr << "warning: " << stage_name << ": " << message << '\n';
  }

  void save_manifest() const {
    std::ofstream f(out("manifest.json"), std::ios::binary | std::ios::trunc);
    f << manifest_.dump(2) << '\n';
  }

  void record_time(const std::string& stage_name, double seconds) const {
    std::ofstream f(out("timings.log"), std::ios::app);
    f << stage_name << '\t' << format_number(seconds) << '\n';
  }

  void write_json(const std::string& name, json body) const {
    json doc = {{"metadata", metadata()}};
    for (auto& [k, v] : body.items()) doc[k] = v;
    std::ofstream f(out(name), std::ios::binary | std::ios::trunc);
    if (!f) throw DataError("cannot write " + out(name));
    f << doc.dump(2) << '\n';
  }

 private:
  const PipelineConfig& cfg_;
  std::string subcommand_;
  std::string hash_;
  json manifest_;
};

/// TSV with a metadata comment line followed by a column header row.
class TsvWriter {
 public:
  TsvWriter(const Run& run, const std::string& name, const std::vector<std::string>& columns,
            const std::vector<std::pair<std::string, std::string>>& extra = {})
      : out_(run.out(name), std::ios::binary | std::ios::trunc) {
    if (!out_) throw DataError("cannot write " + run.out(name));
    out_ << "# producer=" << kToolName << " subcommand=" << run.subcommand()
         << " config_hash=" << run.cfg().hash() << " rng_seed=" << run.cfg().rng_seed;
    for (const auto& [k, v] : extra) out_ << ' ' << k << '=' << v;
    out_ << '\n';
    row(columns);
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << '\t';
      out_ << cells[i];
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

std::string num(double v) { return format_number(v); }
std::string num(std::int64_t v) { return std::to_string(v); }
std::string num(std::size_t v) { return std::to_string(v); }

void require_file(const std::string& key, const std::string& path) {
  if (path.empty()) throw ConfigError(key + " is required for this subcommand");
  if (!fs::exists(path)) throw ConfigError(key + ": path does not exist: " + path);
}

void validate_config(const PipelineConfig& c) {
  if (c.output_dir.empty()) throw ConfigError("output_dir must not be empty");
  if (c.bin_width_seconds <= 0) throw ConfigError("bin_width_seconds must be > 0");
  if (c.cause_words.empty()) throw ConfigError("cause_words must not be empty");
  if (!(c.tfidf_percentile >= 0.0 && c.tfidf_percentile < 100.0)) {
    throw ConfigError("tfidf_percentile must lie in [0, 100)");
  }
  if (c.tfidf_top_k < 1) throw ConfigError("tfidf_top_k must be >= 1");
  if (c.candidate_pooling != "union" && c.candidate_pooling != "intersection") {
    throw ConfigError("candidate_pooling must be 'union' or 'intersection'");
  }
  if (!(c.or_alpha > 0.0 && c.or_alpha < 1.0)) throw ConfigError("or_alpha must lie in (0, 1)");
  if (c.tree_branch < 1) throw ConfigError("tree_branch must be >= 1");
  if (c.tree_depth < 1) throw ConfigError("tree_depth must be >= 1");
  if (c.ngram_count != "occurrences" && c.ngram_count != "documents") {
    throw ConfigError("ngram_count must be 'occurrences' or 'documents'");
  }
  if (c.histogram_bins < 1) throw ConfigError("histogram_bins must be >= 1");
  if (c.sentiment_weighting != "token" && c.sentiment_weighting != "type") {
    throw ConfigError("sentiment_weighting must be 'token' or 'type'");
  }
  if (c.tagger_epochs < 1) throw ConfigError("tagger_epochs must be >= 1");
  if (c.lda_topics < 1) throw ConfigError("lda_topics must be >= 1");
  if (!(c.lda_alpha_sum > 0.0)) throw ConfigError("lda_alpha_sum must be > 0");
  if (!(c.lda_beta > 0.0)) throw ConfigError("lda_beta must be > 0");
  if (c.lda_iterations < 1) throw ConfigError("lda_iterations must be >= 1");
  if (c.lda_vocab_min_count < 1) throw ConfigError("lda_vocab_min_count must be >= 1");
  if (c.lda_top_words < 1) throw ConfigError("lda_top_words must be >= 1");
  if (c.threads < 1) throw ConfigError("threads must be >= 1");
  for (const auto& p : c.input) require_file("input", p);
  for (const auto& p : c.annotations) require_file("annotations", p);
  auto optional_path = [](const std::string& key, const std::string& p) {
    if (!p.empty() && !fs::exists(p)) throw ConfigError(key + ": path does not exist: " + p);
  };
  optional_path("documents", c.documents);
  optional_path("stopword_dir", c.stopword_dir);
  optional_path("lexicon", c.lexicon);
  optional_path("sentiment_labels", c.sentiment_labels);
  optional_path("treebank", c.treebank);
  optional_path("tagger_model", c.tagger_model);
  optional_path("lda_stopwords", c.lda_stopwords);
}

SelectionRules selection_rules(const PipelineConfig& c) {
  SelectionRules rules;
  rules.cause_words = {c.cause_words.begin(), c.cause_words.end()};
  rules.bidirectional_stems = c.bidirectional_stems;
  rules.bin_width_seconds = c.bin_width_seconds;
  rules.rng_seed = c.rng_seed;
  try {
    rules.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("cause_words/bin_width_seconds: ") + e.what());
  }
  return rules;
}

Corpus load_corpus(const Run& run, const std::string& name) {
  const std::string path = run.out(name);
  if (!fs::exists(path)) {
    throw DataError(path + " not found; run the stage that produces it first");
  }
  return read_documents(path);
}

struct CorpusFiles {
  Corpus causal;
  Corpus control;
};

CorpusFiles load_pair(const Run& run) { return {load_corpus(run, "causal.ndjson"), load_corpus(run, "control.ndjson")}; }

bool all_have(const Corpus& corpus, bool pos) {
  for (const auto& d : corpus) {
    if (pos ? !d.pos_tags : !d.ne_tags) return false;
  }
  return !corpus.empty();
}

Corpus ne_subset(const Corpus& corpus) {
  Corpus out;
  for (const auto& d : corpus) {
    if (d.ne_tags) out.push_back(d);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stages

void stage_ingest(Run& run) {
  const auto& c = run.cfg();
  if (c.input.empty()) throw ConfigError("input is required for ingest");
  require_file("stopword_dir", c.stopword_dir);
  auto stopwords = StopwordTable::load_directory(c.stopword_dir);

  std::vector<RawDocument> raw;
  std::size_t malformed = 0, duplicates = 0, lines = 0;
  std::unordered_map<std::string, int> seen;
  for (const auto& path : c.input) {
    RawDocumentReader reader(path);
    while (auto doc = reader.next()) {
      if (seen.contains(doc->id)) {
        ++duplicates;
        continue;
      }
      seen.emplace(doc->id, 0);
      raw.push_back(std::move(*doc));
    }
    malformed += reader.malformed();
    duplicates += reader.duplicates();
    lines += reader.lines_read();
  }

  IngestOptions options;
  options.preprocess = {c.keep_punctuation, c.keep_casing};
  options.threads = c.threads;
  auto result = ingest(raw, stopwords, options);
  write_documents(run.out("documents.ndjson"), result.documents);

  auto& s = run.stage("ingest");
  s["lines_read"] = lines;
  s["malformed_lines"] = malformed;
  s["duplicate_ids"] = duplicates;
  s["documents_in"] = result.input;
  s["excluded"] = result.excluded;
  s["language_rejected"] = result.language_rejected;
  s["documents_out"] = result.documents.size();
  s["stopword_languages"] = stopwords.sets().size();
  if (malformed > 0) run.warn("ingest", std::to_string(malformed) + " malformed input lines skipped");
  if (duplicates > 0) run.warn("ingest", std::to_string(duplicates) + " duplicate ids skipped");
}

Corpus select_input(Run& run) {
  const auto& c = run.cfg();
  if (!c.documents.empty()) return read_documents(c.documents);
  if (fs::exists(run.out("documents.ndjson"))) return read_documents(run.out("documents.ndjson"));
  if (c.input.empty()) throw ConfigError("select needs documents, input, or a prior ingest run");
  // Raw posts straight from input, preprocessed without language gating.
  Corpus corpus;
  PreprocessOptions pre{c.keep_punctuation, c.keep_casing};
  for (const auto& path : c.input) {
    for (const auto& raw : load_ndjson(path).documents) corpus.push_back(preprocess(raw, pre));
  }
  return corpus;
}

void stage_select(Run& run) {
  const auto& c = run.cfg();
  auto rules = selection_rules(c);
  Corpus docs = select_input(run);
  auto pair = build_corpus_pair(docs, rules, c.threads);
  write_documents(run.out("causal.ndjson"), pair.causal);
  write_documents(run.out("control.ndjson"), pair.control);
  {
    TsvWriter tsv(run, "bins.tsv", {"bin_start", "causal_count", "control_count", "shortfall"});
    for (const auto& [start, counts] : pair.per_bin) {
      tsv.row({format_timestamp(start), num(counts.causal), num(counts.control), num(counts.shortfall)});
    }
  }
  auto& s = run.stage("select");
  s["documents_in"] = docs.size();
  s["causal"] = pair.causal.size();
  s["control_eligible"] = pair.eligible;
  s["excluded"] = pair.excluded;
  s["control"] = pair.control.size();
  s["bins"] = pair.per_bin.size();
  s["shortfall"] = pair.total_shortfall();
  if (pair.total_shortfall() > 0) {
    run.warn("select", "control shortfall of " + std::to_string(pair.total_shortfall()) + " documents");
  }
}

void stage_tag_train(Run& run) {
  const auto& c = run.cfg();
  require_file("treebank", c.treebank);
  auto corpus = read_treebank(c.treebank);
  TrainOptions options;
  options.epochs = c.tagger_epochs;
  options.seed = c.rng_seed;
  auto model = train(corpus, options);
  json body = json::parse(model.to_json());
  run.write_json("tagger_model.json", body);
  auto& s = run.stage("tag-train");
  s["sentences"] = corpus.size();
  s["epochs"] = c.tagger_epochs;
  s["tags"] = model.tag_set().size();
  s["training_accuracy"] = accuracy(model, corpus);
}

PerceptronModel load_model(const Run& run) {
  const auto& c = run.cfg();
  const std::string path = !c.tagger_model.empty() ? c.tagger_model : run.out("tagger_model.json");
  if (!fs::exists(path)) throw ConfigError("tagger_model is required (or run tag-train first)");
  return PerceptronModel::load(path);
}

void stage_tag(Run& run) {
  auto model = load_model(run);
  auto files = load_pair(run);
  auto& s = run.stage("tag");
  for (auto* entry : {&files.causal, &files.control}) {
    Corpus& corpus = *entry;
    for_each_shard(corpus.size(), run.cfg().threads, [&](std::size_t b, std::size_t e, std::size_t) {
      for (std::size_t i = b; i < e; ++i) corpus[i] = tag(model, std::move(corpus[i]));
    });
  }
  write_documents(run.out("causal.ndjson"), files.causal);
  write_documents(run.out("control.ndjson"), files.control);
  s["documents_in"] = files.causal.size() + files.control.size();
  s["documents_tagged"] = files.causal.size() + files.control.size();
}

void stage_annotate(Run& run) {
  const auto& c = run.cfg();
  if (c.annotations.empty()) throw ConfigError("annotations is required for annotate");
  std::vector<AnnotationEntry> entries;
  for (const auto& path : c.annotations) {
    auto more = read_annotations(path);
    entries.insert(entries.end(), more.begin(), more.end());
  }
  auto files = load_pair(run);
  auto& s = run.stage("annotate");
  TsvWriter tsv(run, "annotate_report.tsv",
                {"corpus", "documents", "pos_attached", "ne_attached", "pos_coverage", "ne_coverage",
                 "rejected"});
  std::size_t unknown_total = 0;
  std::unordered_map<std::string, int> known;
  for (const auto& d : files.causal) known[d.id] = 1;
  for (const auto& d : files.control) known[d.id] = 1;
  for (const auto& e : entries) {
    if (!known.contains(e.id)) ++unknown_total;
  }
  for (auto [name, corpus] : {std::pair{"causal", &files.causal}, std::pair{"control", &files.control}}) {
    auto report = import_annotations(*corpus, entries);
    tsv.row({name, num(report.documents), num(report.attached_pos), num(report.attached_ne),
             num(report.pos_coverage()), num(report.ne_coverage()), num(report.errors.size())});
    s[std::string(name) + "_pos_coverage"] = report.pos_coverage();
    s[std::string(name) + "_ne_coverage"] = report.ne_coverage();
    for (const auto& err : report.errors) run.warn("annotate", err);
  }
  s["unknown_ids"] = unknown_total;
  if (unknown_total > 0) {
    run.warn("annotate", std::to_string(unknown_total) + " annotation rows reference unknown ids");
  }
  write_documents(run.out("causal.ndjson"), files.causal);
  write_documents(run.out("control.ndjson"), files.control);
}

void write_freq(Run& run, const std::string& name, const FrequencyTable& table) {
  TsvWriter tsv(run, name, {"item", "f", "df", "p"},
                {{"total", num(table.total)}, {"num_docs", num(table.num_docs)}});
  for (const auto& item : table.items()) {
    tsv.row({item, num(table.f(item)), num(table.df(item)), num(table.p(item))});
  }
}

struct Tables {
  FrequencyTable cause;
  FrequencyTable control;
};

std::map<std::string, Tables> count_all(const Run& run, const CorpusFiles& files) {
  const std::size_t threads = run.cfg().threads;
  std::map<std::string, Tables> out;
  out["unigram"] = {count(files.causal, ItemKind::Unigram, threads), count(files.control, ItemKind::Unigram, threads)};
  if (all_have(files.causal, true) && all_have(files.control, true)) {
    out["pos"] = {count(files.causal, ItemKind::Pos, threads), count(files.control, ItemKind::Pos, threads)};
  }
  Corpus ne_c = ne_subset(files.causal), ne_n = ne_subset(files.control);
  if (!ne_c.empty() && !ne_n.empty()) {
    out["ne"] = {count(ne_c, ItemKind::Ne, threads), count(ne_n, ItemKind::Ne, threads)};
  }
  return out;
}

void stage_freq(Run& run) {
  auto files = load_pair(run);
  auto tables = count_all(run, files);
  auto& s = run.stage("freq");
  s["documents_in"] = files.causal.size() + files.control.size();
  for (const auto& [kind, t] : tables) {
    write_freq(run, "freq_" + kind + "_causal.tsv", t.cause);
    write_freq(run, "freq_" + kind + "_control.tsv", t.control);
    s[kind + "_items"] = shared_vocabulary(t.cause, t.control).size();
  }
  if (!tables.contains("pos")) run.warn("freq", "documents lack pos tags; pos tables skipped");
  if (!tables.contains("ne")) run.warn("freq", "no ne annotations; ne tables skipped");
}

TfIdfOptions tfidf_options(const PipelineConfig& c) {
  TfIdfOptions o;
  o.percentile = c.tfidf_percentile;
  o.top_k = c.tfidf_top_k;
  return o;
}

void stage_tfidf(Run& run) {
  auto files = load_pair(run);
  const auto options = tfidf_options(run.cfg());
  auto& s = run.stage("tfidf");
  for (auto [name, corpus] : {std::pair{"causal", &files.causal}, std::pair{"control", &files.control}}) {
    auto table = count(*corpus, ItemKind::Unigram, run.cfg().threads);
    auto records = tfidf_table(table, options);
    TsvWriter tsv(run, std::string("tfidf_") + name + ".tsv", {"item", "f", "df", "tfidf", "percentile_rank", "selected"},
                  {{"num_docs", num(table.num_docs)}, {"percentile", num(options.percentile)},
                   {"top_k", num(options.top_k)}, {"log", "natural"}});
    std::size_t selected = 0;
    for (const auto& r : records) {
      tsv.row({r.item, num(r.f), num(r.df), num(r.tfidf), num(r.percentile_rank), r.selected ? "1" : "0"});
      selected += r.selected ? 1 : 0;
    }
    s[std::string(name) + "_selected"] = selected;
  }
}

void stage_odds(Run& run) {
  const auto& c = run.cfg();
  auto files = load_pair(run);
  auto tables = count_all(run, files);
  OddsRatioOptions options;
  options.alpha = c.or_alpha;
  options.haldane_correction = c.haldane_correction;
  auto& s = run.stage("odds");
  for (const auto& [kind, t] : tables) {
    std::vector<std::string> items =
        kind == "unigram"
            ? unigram_candidates(t.cause, t.control, tfidf_options(c),
                                 c.candidate_pooling == "union" ? CandidatePooling::Union
                                                                : CandidatePooling::Intersection)
            : shared_vocabulary(t.cause, t.control);
    auto records = odds_ratios(t.cause, t.control, items, options);
    std::vector<std::pair<std::string, std::string>> extra{{"alpha", num(c.or_alpha)},
                                                           {"haldane_correction", bool_str(c.haldane_correction)}};
    TsvWriter odds(run, "odds_" + kind + ".tsv",
                   {"item", "a", "b", "c", "d", "or", "ci_low", "ci_high", "significant", "degenerate"}, extra);
    TsvWriter forest(run, "forest_" + kind + ".tsv", {"item", "log_or", "log_ci_low", "log_ci_high", "significant"},
                     extra);
    std::size_t significant = 0, degenerate = 0;
    for (const auto& r : records) {
      odds.row({r.item, num(r.a), num(r.b), num(r.c), num(r.d), num(r.odds_ratio), num(r.ci_low), num(r.ci_high),
                r.significant ? "1" : "0", r.degenerate ? "1" : "0"});
      forest.row({r.item, num(r.log_or), num(std::log(r.ci_low)), num(std::log(r.ci_high)),
                  r.significant ? "1" : "0"});
      significant += r.significant ? 1 : 0;
      degenerate += r.degenerate ? 1 : 0;
    }
    s[kind + "_items"] = records.size();
    s[kind + "_significant"] = significant;
    s[kind + "_degenerate"] = degenerate;
  }
}

void stage_causetree(Run& run) {
  const auto& c = run.cfg();
  Corpus causal = load_corpus(run, "causal.ndjson");
  auto mode = c.ngram_count == "documents" ? NGramCountMode::Documents : NGramCountMode::Occurrences;
  auto index = build_index(causal, c.tree_depth + 1, mode, c.threads);
  auto& s = run.stage("causetree");
  s["documents_in"] = causal.size();
  TsvWriter rates(run, "causetree_rates.tsv", {"root", "direction", "ngram", "count", "rate"},
                  {{"num_docs", num(index.num_docs())}, {"ngram_count", c.ngram_count}});
  std::vector<std::string> roots = c.cause_words;
  std::sort(roots.begin(), roots.end());
  for (const auto& root : roots) {
    for (Direction dir : {Direction::Backward, Direction::Forward}) {
      const std::string name = "causetree_" + root + "_" + to_string(dir) + ".json";
      if (index.count({root}) == 0) {
        run.warn("causetree", "root '" + root + "' does not occur in the causal corpus");
        run.write_json(name, {{"root", root}, {"direction", to_string(dir)}, {"num_docs", index.num_docs()},
                              {"tree", nullptr}});
        continue;
      }
      auto tree = grow_tree(index, root, dir, c.tree_depth, c.tree_branch);
      run.write_json(name, json::parse(tree_to_json(tree)));
      std::function<void(const CauseTreeNode&)> visit = [&](const CauseTreeNode& node) {
        if (node.rate) {
          rates.row({root, to_string(dir), join_ngram(node.ngram), num(node.count), num(*node.rate)});
        }
        for (const auto& child : node.children) visit(child);
      };
      visit(tree.root);
    }
  }
}

void write_histogram(Run& run, const std::string& name, const Histogram& h) {
  TsvWriter tsv(run, name, {"bin_low", "bin_high", "weight"},
                {{"excluded_tokens", num(h.excluded_tokens)}, {"filter_fraction", num(h.filter_fraction)}});
  const double width = (h.spec.high - h.spec.low) / static_cast<double>(h.spec.bins);
  for (std::size_t i = 0; i < h.weights.size(); ++i) {
    const double lo = h.spec.low + width * static_cast<double>(i);
    const double hi = i + 1 == h.weights.size() ? h.spec.high : h.spec.low + width * static_cast<double>(i + 1);
    tsv.row({num(lo), num(hi), num(h.weights[i])});
  }
}

void stage_sentiment(Run& run) {
  const auto& c = run.cfg();
  require_file("lexicon", c.lexicon);
  auto lexicon = SentimentLexicon::load(c.lexicon);
  auto files = load_pair(run);
  const auto spec = HistogramSpec::for_lexicon(lexicon, c.histogram_bins);
  const auto weighting = c.sentiment_weighting == "type" ? Weighting::Type : Weighting::Token;
  auto& s = run.stage("sentiment");

  struct Side {
    std::string name;
    const Corpus* corpus;
    FrequencyTable table;
    ScoredVocabulary vocab;
    double mean = 0.0;
    std::int64_t tokens = 0;
  };
  std::vector<Side> sides;
  for (auto [name, corpus] : {std::pair{"causal", &files.causal}, std::pair{"control", &files.control}}) {
    Side side{name, corpus, count(*corpus, ItemKind::Unigram, c.threads), {}, 0.0, 0};
    side.vocab = scored_vocabulary(side.table, lexicon, c.tfidf_percentile);
    side.mean = corpus_mean_score(side.table, side.vocab, lexicon);
    for (const auto& w : side.vocab.words) side.tokens += side.table.f(w);
    sides.push_back(std::move(side));
  }
  auto test = welch_t_test(token_scores(sides[0].table, sides[0].vocab, lexicon),
                           token_scores(sides[1].table, sides[1].vocab, lexicon));

  std::vector<std::pair<std::string, std::string>> meta{{"recentering", "unweighted_lexicon_mean"},
                                                        {"lexicon_mean_raw", num(lexicon.mean_raw())},
                                                        {"weighting", c.sentiment_weighting}};
  {
    TsvWriter tsv(run, "sentiment_summary.tsv", {"corpus", "mean", "n_tokens", "coverage", "t", "p"}, meta);
    for (const auto& side : sides) {
      tsv.row({side.name, num(side.mean), num(side.tokens), num(side.vocab.coverage), num(test.t), num(test.p)});
    }
  }
  const bool tagged = all_have(files.causal, true) && all_have(files.control, true);
  for (const auto& side : sides) {
    write_histogram(run, "sentiment_hist_" + side.name + ".tsv",
                    score_distribution(*side.corpus, side.vocab, lexicon, spec, std::nullopt, weighting, c.threads));
    if (!tagged) continue;
    for (PosClass pc : {PosClass::Noun, PosClass::Verb, PosClass::Adjective}) {
      write_histogram(run, "sentiment_hist_" + side.name + "_" + to_string(pc) + ".tsv",
                      score_distribution(*side.corpus, side.vocab, lexicon, spec, pc, weighting, c.threads));
    }
    s[side.name + "_vocabulary"] = side.vocab.words.size();
  }
  if (!tagged) run.warn("sentiment", "documents lack pos tags; part-of-speech histograms skipped");
  s["t"] = test.t;
  s["p"] = test.p;
  s["welch_df"] = test.df;
}

void stage_doc_classes(Run& run) {
  const auto& c = run.cfg();
  require_file("sentiment_labels", c.sentiment_labels);
  auto labels = read_sentiment_labels(c.sentiment_labels);
  auto files = load_pair(run);
  auto& s = run.stage("doc-classes");
  TsvWriter tsv(run, "doc_classes.tsv", {"corpus", "class", "count", "proportion"});
  std::size_t known = 0;
  for (auto [name, corpus] : {std::pair{"causal", &files.causal}, std::pair{"control", &files.control}}) {
    auto dist = class_distribution(labels, *corpus);
    for (std::size_t i = 0; i < kSentimentClasses.size(); ++i) {
      tsv.row({name, to_string(kSentimentClasses[i]), num(dist.counts[i]), num(dist.proportions[i])});
    }
    s[std::string(name) + "_labeled"] = dist.labeled;
    s[std::string(name) + "_unlabeled"] = dist.unlabeled;
    if (dist.unlabeled > 0) {
      run.warn("doc-classes", std::to_string(dist.unlabeled) + " " + name + " documents have no label");
    }
    known += dist.labeled;
  }
  const std::size_t unknown = labels.size() - known;
  s["unknown_ids"] = unknown;
  if (unknown > 0) run.warn("doc-classes", std::to_string(unknown) + " labels reference unknown ids");
}

void stage_lda(Run& run) {
  const auto& c = run.cfg();
  Corpus causal = load_corpus(run, "causal.ndjson");
  LdaConfig config;
  config.topics = c.lda_topics;
  config.alpha_sum = c.lda_alpha_sum;
  config.beta = c.lda_beta;
  config.iterations = c.lda_iterations;
  config.seed = c.rng_seed;
  config.vocab_min_count = c.lda_vocab_min_count;
  if (!c.lda_stopwords.empty()) {
    std::ifstream in(c.lda_stopwords);
    std::string line;
    while (std::getline(in, line)) {
      for (auto& w : text::split_whitespace(line)) config.drop_words.insert(text::to_lower(w));
    }
  }
  auto state = fit(causal, config);
  auto rep = report(state, c.lda_top_words);
  {
    TsvWriter tsv(run, "lda_topwords.tsv", {"topic", "rank", "word", "phi"});
    for (std::size_t t = 0; t < rep.top_words.size(); ++t) {
      for (std::size_t r = 0; r < rep.top_words[t].size(); ++r) {
        tsv.row({num(t), num(r + 1), rep.top_words[t][r].word, num(rep.top_words[t][r].probability)});
      }
    }
  }
  {
    std::vector<std::string> cols{"doc_id"};
    for (std::size_t t = 0; t < state.topics(); ++t) cols.push_back("topic_" + std::to_string(t));
    TsvWriter tsv(run, "lda_theta.tsv", cols);
    for (std::size_t d = 0; d < rep.doc_ids.size(); ++d) {
      std::vector<std::string> row{rep.doc_ids[d]};
      for (double v : rep.theta[d]) row.push_back(num(v));
      tsv.row(row);
    }
  }
  run.write_json("lda_meta.json",
                 {{"config",
                   {{"topics", config.topics},
                    {"alpha_sum", config.alpha_sum},
                    {"alpha", config.alpha()},
                    {"beta", config.beta},
                    {"iterations", config.iterations},
                    {"seed", config.seed},
                    {"vocab_min_count", config.vocab_min_count},
                    {"drop_words", config.drop_words.size()}}},
                  {"iterations_completed", state.iterations_done},
                  {"invariant_checks", {{"performed", state.invariant_checks}, {"failed", 0}}},
                  {"hyperparameter_optimization", false},
                  {"samples_averaged", 1},
                  {"vocabulary_size", state.vocabulary.size()},
                  {"documents", state.doc_ids.size()}});
  auto& s = run.stage("lda");
  s["documents_in"] = causal.size();
  s["vocabulary"] = state.vocabulary.size();
  s["invariant_checks"] = state.invariant_checks;
}

void stage_variants(Run& run) {
  const auto& c = run.cfg();
  if (c.input.empty()) throw ConfigError("input (raw posts) is required for variants");
  auto model = load_model(run);
  auto files = load_pair(run);
  std::unordered_map<std::string, RawDocument> raw;
  for (const auto& path : c.input) {
    for (auto& doc : load_ndjson(path).documents) raw.emplace(doc.id, std::move(doc));
  }
  auto lookup = [&](const Corpus& corpus) {
    std::vector<RawDocument> out;
    for (const auto& d : corpus) {
      auto it = raw.find(d.id);
      if (it == raw.end()) throw DataError("document " + d.id + " not found in the raw input");
      out.push_back(it->second);
    }
    return out;
  };
  OddsRatioOptions options;
  options.alpha = c.or_alpha;
  options.haldane_correction = c.haldane_correction;
  auto study = variant_study(lookup(files.causal), lookup(files.control), model, options, c.threads);
  {
    TsvWriter tsv(run, "variants.tsv", {"variant_a", "variant_b", "pearson_rho", "shared_tags", "dropped_tags"},
                  {{"scale", "log_or"}});
    for (const auto& cmp : study.comparisons) {
      tsv.row({cmp.variant_a, cmp.variant_b, num(cmp.pearson_rho), num(cmp.tags.size()), join(cmp.dropped)});
    }
  }
  {
    TsvWriter tsv(run, "variants_odds.tsv", {"variant", "item", "a", "b", "c", "d", "or", "log_or", "degenerate"});
    for (const auto& v : study.variants) {
      for (const auto& r : v.records) {
        tsv.row({variant_name(v.keep_punctuation, v.keep_casing), r.item, num(r.a), num(r.b), num(r.c), num(r.d),
                 num(r.odds_ratio), num(r.log_or), r.degenerate ? "1" : "0"});
      }
    }
  }
  auto& s = run.stage("variants");
  s["documents_in"] = files.causal.size() + files.control.size();
  s["rho_cased"] = study.comparisons[0].pearson_rho;
  s["rho_lower"] = study.comparisons[1].pearson_rho;
}

using StageFn = void (*)(Run&);

const std::map<std::string, StageFn>& stages() {
  static const std::map<std::string, StageFn> table{
      {"ingest", stage_ingest}, {"select", stage_select},       {"tag-train", stage_tag_train},
      {"tag", stage_tag},       {"annotate", stage_annotate},   {"freq", stage_freq},
      {"tfidf", stage_tfidf},   {"odds", stage_odds},           {"causetree", stage_causetree},
      {"sentiment", stage_sentiment}, {"doc-classes", stage_doc_classes}, {"lda", stage_lda},
      {"variants", stage_variants}};
  return table;
}

void run_stage(Run& run, const std::string& name) {
  const auto start = std::chrono::steady_clock::now();
  try {
    stages().at(name)(run);
  } catch (const DataError& e) {
    throw DataError(name + ": " + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(name + ": " + e.what());
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  run.record_time(name, elapsed.count());
  run.save_manifest();
}

}  // namespace

void run_subcommand(const std::string& name, const PipelineConfig& config) {
  const auto& names = subcommand_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw ConfigError("unknown subcommand '" + name + "'");
  }
  validate_config(config);
  Run run(config, name);
  if (name != "report-all") {
    run.open_manifest(false);
    run_stage(run, name);
    return;
  }
  // The full study: ingest -> select -> tag -> stats -> cause-trees -> sentiment -> topics,
  // then the preprocessing-variant comparison.
  if (config.tagger_model.empty() && config.treebank.empty()) {
    throw ConfigError("report-all needs tagger_model or treebank");
  }
  run.open_manifest(true);
  run_stage(run, "ingest");
  run_stage(run, "select");
  if (config.tagger_model.empty()) run_stage(run, "tag-train");
  run_stage(run, "tag");
  if (!config.annotations.empty()) run_stage(run, "annotate");
  run_stage(run, "freq");
  run_stage(run, "tfidf");
  run_stage(run, "odds");
  run_stage(run, "causetree");
  if (!config.lexicon.empty()) run_stage(run, "sentiment");
  if (!config.sentiment_labels.empty()) run_stage(run, "doc-classes");
  run_stage(run, "lda");
  run_stage(run, "variants");
}

int run_and_report(const std::string& name, const PipelineConfig& config) {
  try {
    run_subcommand(name, config);
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace causal
