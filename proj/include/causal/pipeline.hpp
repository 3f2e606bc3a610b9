#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace causal {

inline constexpr const char* kToolName = "causal-corpus";
inline constexpr const char* kToolVersion = "0.1.0";

/// Every setting of a pipeline run. Field names double as configuration-file keys.
struct PipelineConfig {
  std::vector<std::string> input;
  std::string documents;
  std::string stopword_dir;
  std::string lexicon;
  std::vector<std::string> annotations;
  std::string sentiment_labels;
  std::string treebank;
  std::string tagger_model;
  std::string output_dir = "out";

  bool keep_punctuation = false;
  bool keep_casing = true;

  std::vector<std::string> cause_words{"caused", "causes", "causing"};
  std::vector<std::string> bidirectional_stems{"associat", "relat", "connect", "correlat"};
  std::int64_t bin_width_seconds = 900;

  double tfidf_percentile = 90.0;
  std::size_t tfidf_top_k = 1500;
  std::string candidate_pooling = "union";
  double or_alpha = 0.05;
  bool haldane_correction = false;

  std::size_t tree_depth = 3;
  std::size_t tree_branch = 2;
  std::string ngram_count = "occurrences";

  std::size_t histogram_bins = 50;
  std::string sentiment_weighting = "token";

  int tagger_epochs = 5;

  std::size_t lda_topics = 10;
  double lda_alpha_sum = 5.0;
  double lda_beta = 0.01;
  int lda_iterations = 1000;
  std::int64_t lda_vocab_min_count = 1;
  std::size_t lda_top_words = 40;
  std::string lda_stopwords;

  std::uint64_t rng_seed = 0;
  std::size_t threads = 1;

  /// (key, value) pairs in key order. Output location and thread count are
  /// left out: neither changes any artifact.
  std::vector<std::pair<std::string, std::string>> echo() const;
  /// FNV-1a over the echo, hex encoded.
  std::string hash() const;
};

const std::vector<std::string>& subcommand_names();

/// Runs one subcommand (or "report-all") against the files in
/// config.output_dir, updating manifest.json. Throws ConfigError,
/// DataError, or other exceptions for internal failures.
void run_subcommand(const std::string& name, const PipelineConfig& config);

/// Maps exceptions to the documented exit codes, printing the message.
int run_and_report(const std::string& name, const PipelineConfig& config);

}  // namespace causal
