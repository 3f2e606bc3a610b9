#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "causal/document.hpp"

namespace causal {

struct LdaConfig {
  std::size_t topics = 10;
  /// Symmetric document-topic prior alpha = alpha_sum / topics.
  double alpha_sum = 5.0;
  double beta = 0.01;
  int iterations = 1000;
  std::uint64_t seed = 0;
  std::int64_t vocab_min_count = 1;
  /// Words removed before fitting (no removal by default).
  std::set<std::string> drop_words;

  double alpha() const { return alpha_sum / static_cast<double>(topics); }
  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
};

/// Collapsed Gibbs sampler state. Documents are held in id order and word
/// ids index the sorted vocabulary.
struct TopicModelState {
  LdaConfig config;
  std::vector<std::string> vocabulary;
  std::vector<std::string> doc_ids;
  std::vector<std::vector<std::uint32_t>> words;
  std::vector<std::vector<std::uint32_t>> z;
  std::vector<std::int64_t> n_wt;  // vocabulary.size() x topics, row-major
  std::vector<std::int64_t> n_dt;  // doc_ids.size() x topics, row-major
  std::vector<std::int64_t> n_t;
  int iterations_done = 0;
  std::int64_t invariant_checks = 0;

  std::size_t topics() const { return n_t.size(); }
  std::int64_t word_topic(std::size_t w, std::size_t t) const { return n_wt[w * topics() + t]; }
  std::int64_t doc_topic(std::size_t d, std::size_t t) const { return n_dt[d * topics() + t]; }
};

/// True when every count table agrees with the assignments in z; otherwise
/// false with a description in *why.
bool check_invariants(const TopicModelState& state, std::string* why = nullptr);

using SweepObserver = std::function<void(int iteration, const TopicModelState&)>;

/// Fits LDA on tokens_lower. Each document samples from its own generator,
/// seeded by (seed, id), and documents are swept in id order, so the result
/// depends only on the corpus content and the config. Count invariants are
/// checked after every sweep; `observer` (if set) runs after each check.
TopicModelState fit(const Corpus& corpus, const LdaConfig& config, const SweepObserver& observer = {});

struct TopicWord {
  std::string word;
  double probability = 0.0;
};

struct TopicReport {
  std::vector<std::string> vocabulary;
  std::vector<std::string> doc_ids;
  /// phi[t][w] = P(w | t)
  std::vector<std::vector<double>> phi;
  /// theta[d][t] = P(t | d)
  std::vector<std::vector<double>> theta;
  std::vector<std::vector<TopicWord>> top_words;
};

/// Smoothed phi and theta plus the top_m words of each topic (ties lexicographic).
TopicReport report(const TopicModelState& state, std::size_t top_m = 40);

}  // namespace causal
