#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "causal/document.hpp"
#include "causal/stats.hpp"

namespace causal {

/// Word -> score lexicon, recentered on the unweighted mean of its raw scores.
class SentimentLexicon {
 public:
  SentimentLexicon() = default;
  explicit SentimentLexicon(std::unordered_map<std::string, double> raw_scores);

  /// TSV lines "word<TAB>score". Blank lines, '#' comments and a first line
  /// whose score column is not numeric (a header) are skipped.
  static SentimentLexicon load(const std::string& path);

  bool contains(const std::string& word) const { return scores_.contains(word); }
  /// Recentered score s(w) = s_raw(w) - mean_raw. Throws std::out_of_range for unknown words.
  double score(const std::string& word) const;
  double raw_score(const std::string& word) const;
  double mean_raw() const { return mean_raw_; }
  double min_score() const { return min_; }
  double max_score() const { return max_; }
  std::size_t size() const { return raw_.size(); }

 private:
  std::unordered_map<std::string, double> raw_;
  std::unordered_map<std::string, double> scores_;
  double mean_raw_ = 0.0;
  double min_ = 0.0;
  double max_ = 0.0;
};

/// Words with a lexicon score whose tf-idf lies above the corpus percentile,
/// plus the share of all token occurrences they account for.
struct ScoredVocabulary {
  std::set<std::string> words;
  double coverage = 0.0;
};

ScoredVocabulary scored_vocabulary(const FrequencyTable& table, const SentimentLexicon& lexicon,
                                   double percentile = 90.0);

/// sum f(w) s(w) / sum f(w) over the scored vocabulary. Throws DataError when it is empty.
double corpus_mean_score(const FrequencyTable& table, const ScoredVocabulary& vocab,
                         const SentimentLexicon& lexicon);

// ---------------------------------------------------------------------------
// Distributions

enum class PosClass { Noun, Verb, Adjective };

const char* to_string(PosClass c);
bool in_class(const std::string& pos_tag, PosClass c);

enum class Weighting { Token, Type };

struct HistogramSpec {
  double low = 0.0;
  double high = 1.0;
  std::size_t bins = 50;

  /// 50 uniform bins over the lexicon's recentered range.
  static HistogramSpec for_lexicon(const SentimentLexicon& lexicon, std::size_t bins = 50);
  std::size_t bin_of(double value) const;
};

struct Histogram {
  HistogramSpec spec;
  std::vector<double> weights;
  /// Token occurrences that did not contribute (unscored, or outside the POS filter).
  std::int64_t excluded_tokens = 0;
  /// Scored weight inside the POS filter over all scored weight (1 without a filter).
  double filter_fraction = 0.0;

  double total_weight() const;
  void merge(const Histogram& other);
};

/// Histogram of s(w) over corpus tokens whose word is in the scored
/// vocabulary (and whose POS tag falls in `pos_filter`, when given). Values
/// outside the spec range land in the nearest edge bin. Type weighting counts
/// each distinct word once.
Histogram score_distribution(const Corpus& corpus, const ScoredVocabulary& vocab,
                             const SentimentLexicon& lexicon, const HistogramSpec& spec,
                             std::optional<PosClass> pos_filter = std::nullopt,
                             Weighting weighting = Weighting::Token, std::size_t threads = 1);

// ---------------------------------------------------------------------------
// Welch two-sample t-test

/// Score -> multiplicity; one observation per token occurrence.
using WeightedSample = std::map<double, std::int64_t>;

WeightedSample token_scores(const FrequencyTable& table, const ScoredVocabulary& vocab,
                            const SentimentLexicon& lexicon);

struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
  double mean_a = 0.0;
  double mean_b = 0.0;
  std::int64_t n_a = 0;
  std::int64_t n_b = 0;
};

/// Two-sided Welch test. Throws DataError if a sample has fewer than two
/// observations or both samples have zero variance.
TTestResult welch_t_test(const WeightedSample& a, const WeightedSample& b);
TTestResult welch_t_test(const std::vector<double>& a, const std::vector<double>& b);

// ---------------------------------------------------------------------------
// Document-level classes

enum class SentimentClass { VeryNegative, Negative, Neutral, Positive, VeryPositive };

inline constexpr std::array<SentimentClass, 5> kSentimentClasses{
    SentimentClass::VeryNegative, SentimentClass::Negative, SentimentClass::Neutral,
    SentimentClass::Positive, SentimentClass::VeryPositive};

const char* to_string(SentimentClass c);
/// Accepts "very negative", "Very_Negative", "verynegative", or 0..4.
std::optional<SentimentClass> parse_sentiment_class(const std::string& label);

using DocSentimentLabels = std::unordered_map<std::string, SentimentClass>;

/// TSV rows "id<TAB>class". Throws DataError on an unknown class label.
DocSentimentLabels read_sentiment_labels(const std::string& path);

struct ClassDistribution {
  std::array<double, 5> proportions{};
  std::array<std::int64_t, 5> counts{};
  std::size_t labeled = 0;
  std::size_t unlabeled = 0;
  /// Labels whose id is not in the corpus.
  std::size_t unknown_ids = 0;
};

ClassDistribution class_distribution(const DocSentimentLabels& labels, const Corpus& corpus);

}  // namespace causal
