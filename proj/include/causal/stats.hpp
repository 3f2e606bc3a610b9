#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "causal/document.hpp"

namespace causal {

enum class ItemKind { Unigram, Pos, Ne };

const char* to_string(ItemKind kind);

/// Occurrence and document counts for one corpus. Tables built from disjoint
/// shards merge by addition.
struct FrequencyTable {
  ItemKind kind = ItemKind::Unigram;
  std::unordered_map<std::string, std::int64_t> counts;
  std::unordered_map<std::string, std::int64_t> doc_freq;
  std::int64_t total = 0;
  std::int64_t num_docs = 0;

  std::int64_t f(const std::string& item) const;
  std::int64_t df(const std::string& item) const;
  double p(const std::string& item) const;

  /// Items in lexicographic order.
  std::vector<std::string> items() const;

  void merge(const FrequencyTable& other);
};

/// Counts tokens_lower (Unigram), pos_tags (Pos) or entity mentions by type
/// (Ne). Throws DataError naming the kind if a document lacks the tags.
FrequencyTable count(const Corpus& corpus, ItemKind kind, std::size_t threads = 1);

// ---------------------------------------------------------------------------
// tf-idf

struct TfIdfRecord {
  std::string item;
  std::int64_t f = 0;
  std::int64_t df = 0;
  double tfidf = 0.0;
  /// Share (in percent) of table items whose tf-idf is <= this one's.
  double percentile_rank = 0.0;
  bool selected = false;
};

/// log f(w) * log(D / df(w)) in the given base.
double tfidf(std::int64_t f, std::int64_t df, std::int64_t num_docs, double log_base = 0.0);

/// Nearest-rank percentile: the ceil(p/100 * n)-th smallest value (rank >= 1).
double nearest_rank_percentile(std::vector<double> values, double percentile);

struct TfIdfOptions {
  double percentile = 90.0;
  std::size_t top_k = 1500;
  /// 0 selects the natural logarithm.
  double log_base = 0.0;
};

/// tf-idf for every item, sorted by item, with `selected` set for the items
/// that are among the top_k most frequent (ties lexicographic) and whose
/// tf-idf strictly exceeds the percentile cutoff.
std::vector<TfIdfRecord> tfidf_table(const FrequencyTable& table, const TfIdfOptions& options = {});

std::set<std::string> tfidf_filter(const FrequencyTable& table, const TfIdfOptions& options = {});

/// Items whose tf-idf strictly exceeds the percentile cutoff (no top_k limit).
std::set<std::string> above_tfidf_percentile(const FrequencyTable& table, double percentile = 90.0);

// ---------------------------------------------------------------------------
// Odds ratios

struct OddsRatioRecord {
  std::string item;
  std::int64_t a = 0, b = 0, c = 0, d = 0;
  double odds_ratio = 0.0;
  double log_or = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  bool significant = false;
  /// A zero cell was present. Without correction the interval is NaN.
  bool degenerate = false;
};

struct OddsRatioOptions {
  double alpha = 0.05;
  /// Adds 0.5 to every cell of a table containing a zero.
  bool haldane_correction = false;
};

/// Two-sided standard normal quantile z_{1-alpha/2}.
double normal_critical_value(double alpha);

/// OR and Wald interval for one 2x2 table (a, b: cause; c, d: control).
OddsRatioRecord odds_ratio(std::string item, std::int64_t a, std::int64_t b, std::int64_t c,
                           std::int64_t d, const OddsRatioOptions& options = {});

/// One record per item, in the order given. a = f_C(x), b = total_C - a,
/// c = f_N(x), d = total_N - c.
std::vector<OddsRatioRecord> odds_ratios(const FrequencyTable& cause, const FrequencyTable& control,
                                         const std::vector<std::string>& items,
                                         const OddsRatioOptions& options = {});

/// Sorted union of both tables' items.
std::vector<std::string> shared_vocabulary(const FrequencyTable& a, const FrequencyTable& b);

enum class CandidatePooling { Union, Intersection };

/// tf-idf-selected unigrams of each corpus, pooled.
std::vector<std::string> unigram_candidates(const FrequencyTable& cause, const FrequencyTable& control,
                                            const TfIdfOptions& options,
                                            CandidatePooling pooling = CandidatePooling::Union);

// ---------------------------------------------------------------------------
// Preprocessing-variant comparison

double pearson(const std::vector<double>& x, const std::vector<double>& y);

struct VariantOdds {
  bool keep_punctuation = false;
  bool keep_casing = true;
  std::vector<OddsRatioRecord> records;
};

std::string variant_name(bool keep_punctuation, bool keep_casing);

struct VariantComparison {
  std::string variant_a;
  std::string variant_b;
  std::vector<std::string> tags;
  std::vector<double> log_or_a;
  std::vector<double> log_or_b;
  /// Tags dropped because either side was degenerate or missing.
  std::vector<std::string> dropped;
  double pearson_rho = 0.0;
};

/// Pearson correlation of log odds ratios over the tags both variants share
/// with non-degenerate records. Throws DataError with fewer than 3 such tags.
VariantComparison compare_variants(const VariantOdds& a, const VariantOdds& b);

}  // namespace causal
