#include "causal/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

#include "causal/tagger.hpp"

namespace causal {

const char* to_string(ItemKind kind) {
  switch (kind) {
    case ItemKind::Unigram: return "unigram";
    case ItemKind::Pos: return "pos";
    case ItemKind::Ne: return "ne";
  }
  return "?";
}

std::int64_t FrequencyTable::f(const std::string& item) const {
  auto it = counts.find(item);
  return it == counts.end() ? 0 : it->second;
}

std::int64_t FrequencyTable::df(const std::string& item) const {
  auto it = doc_freq.find(item);
  return it == doc_freq.end() ? 0 : it->second;
}

double FrequencyTable::p(const std::string& item) const {
  return total == 0 ? 0.0 : static_cast<double>(f(item)) / static_cast<double>(total);
}

std::vector<std::string> FrequencyTable::items() const {
  std::vector<std::string> out;
  out.reserve(counts.size());
  for (const auto& [item, n] : counts) out.push_back(item);
  std::sort(out.begin(), out.end());
  return out;
}

void FrequencyTable::merge(const FrequencyTable& other) {
  if (other.kind != kind) throw std::invalid_argument("cannot merge tables of different kinds");
  for (const auto& [item, n] : other.counts) counts[item] += n;
  for (const auto& [item, n] : other.doc_freq) doc_freq[item] += n;
  total += other.total;
  num_docs += other.num_docs;
}

namespace {

void count_document(const Document& doc, ItemKind kind, FrequencyTable& table) {
  std::vector<std::string> items;
  switch (kind) {
    case ItemKind::Unigram:
      items = doc.tokens_lower;
      break;
    case ItemKind::Pos:
      if (!doc.pos_tags) throw DataError("document " + doc.id + " has no pos tags");
      items = *doc.pos_tags;
      break;
    case ItemKind::Ne:
      if (!doc.ne_tags) throw DataError("document " + doc.id + " has no ne tags");
      for (auto& m : entity_mentions(*doc.ne_tags)) items.push_back(std::move(m.type));
      break;
  }
  ++table.num_docs;
  table.total += static_cast<std::int64_t>(items.size());
  for (const auto& item : items) ++table.counts[item];
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  for (const auto& item : items) ++table.doc_freq[item];
}

}  // namespace

FrequencyTable count(const Corpus& corpus, ItemKind kind, std::size_t threads) {
  std::vector<FrequencyTable> partial(shard_count(corpus.size(), threads));
  for (auto& t : partial) t.kind = kind;
  try {
    for_each_shard(corpus.size(), threads, [&](std::size_t begin, std::size_t end, std::size_t shard) {
      for (std::size_t i = begin; i < end; ++i) count_document(corpus[i], kind, partial[shard]);
    });
  } catch (const DataError& e) {
    throw DataError(std::string("cannot count ") + to_string(kind) + " items: " + e.what());
  }
  FrequencyTable table;
  table.kind = kind;
  for (const auto& t : partial) table.merge(t);
  return table;
}

// ---------------------------------------------------------------------------

double tfidf(std::int64_t f, std::int64_t df, std::int64_t num_docs, double log_base) {
  if (f < 1 || df < 1 || num_docs < df) throw std::invalid_argument("tf-idf needs 1 <= df <= D and f >= 1");
  double tf = std::log(static_cast<double>(f));
  double idf = std::log(static_cast<double>(num_docs) / static_cast<double>(df));
  if (log_base > 0.0) {
    const double scale = std::log(log_base);
    tf /= scale;
    idf /= scale;
  }
  return tf * idf;
}

double nearest_rank_percentile(std::vector<double> values, double percentile) {
  if (values.empty()) throw std::invalid_argument("percentile of an empty set");
  if (!(percentile >= 0.0 && percentile <= 100.0)) throw std::invalid_argument("percentile out of [0, 100]");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  auto rank = static_cast<std::size_t>(std::ceil(percentile * n / 100.0));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  return values[rank - 1];
}

std::vector<TfIdfRecord> tfidf_table(const FrequencyTable& table, const TfIdfOptions& options) {
  if (table.num_docs == 0) throw DataError("tf-idf undefined for a corpus with no documents");
  if (table.counts.empty()) throw DataError("tf-idf undefined for an empty frequency table");
  if (!(options.percentile >= 0.0 && options.percentile < 100.0)) {
    throw std::invalid_argument("tf-idf percentile must lie in [0, 100)");
  }
  if (options.log_base != 0.0 && !(options.log_base > 0.0 && options.log_base != 1.0)) {
    throw std::invalid_argument("log base must be positive and != 1");
  }

  std::vector<TfIdfRecord> records;
  records.reserve(table.counts.size());
  for (const auto& item : table.items()) {
    TfIdfRecord r;
    r.item = item;
    r.f = table.f(item);
    r.df = table.df(item);
    // Selection uses natural-log scores: a base change rescales every score
    // by the same positive constant, but rounding it per item could break ties.
    r.tfidf = tfidf(r.f, r.df, table.num_docs);
    records.push_back(std::move(r));
  }

  std::vector<double> sorted;
  sorted.reserve(records.size());
  for (const auto& r : records) sorted.push_back(r.tfidf);
  std::sort(sorted.begin(), sorted.end());
  const double cutoff = nearest_rank_percentile(sorted, options.percentile);

  std::vector<const TfIdfRecord*> by_freq;
  for (const auto& r : records) by_freq.push_back(&r);
  std::sort(by_freq.begin(), by_freq.end(), [](const TfIdfRecord* x, const TfIdfRecord* y) {
    return x->f != y->f ? x->f > y->f : x->item < y->item;
  });
  std::set<std::string> frequent;
  for (std::size_t i = 0; i < by_freq.size() && i < options.top_k; ++i) frequent.insert(by_freq[i]->item);

  const double n = static_cast<double>(sorted.size());
  for (auto& r : records) {
    auto at_or_below = std::upper_bound(sorted.begin(), sorted.end(), r.tfidf) - sorted.begin();
    r.percentile_rank = 100.0 * static_cast<double>(at_or_below) / n;
    r.selected = r.tfidf > cutoff && frequent.contains(r.item);
  }
  if (options.log_base > 0.0) {
    for (auto& r : records) r.tfidf = tfidf(r.f, r.df, table.num_docs, options.log_base);
  }
  return records;
}

std::set<std::string> tfidf_filter(const FrequencyTable& table, const TfIdfOptions& options) {
  std::set<std::string> out;
  for (const auto& r : tfidf_table(table, options)) {
    if (r.selected) out.insert(r.item);
  }
  return out;
}

std::set<std::string> above_tfidf_percentile(const FrequencyTable& table, double percentile) {
  TfIdfOptions options;
  options.percentile = percentile;
  options.top_k = std::numeric_limits<std::size_t>::max();
  return tfidf_filter(table, options);
}

// ---------------------------------------------------------------------------

double normal_critical_value(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), 1.0 - alpha / 2.0);
}

OddsRatioRecord odds_ratio(std::string item, std::int64_t a, std::int64_t b, std::int64_t c,
                           std::int64_t d, const OddsRatioOptions& options) {
  if (a < 0 || b < 0 || c < 0 || d < 0) throw std::invalid_argument("negative cell count");
  OddsRatioRecord r;
  r.item = std::move(item);
  r.a = a;
  r.b = b;
  r.c = c;
  r.d = d;
  r.degenerate = a == 0 || b == 0 || c == 0 || d == 0;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  double ca = static_cast<double>(a), cb = static_cast<double>(b);
  double cc = static_cast<double>(c), cd = static_cast<double>(d);
  if (r.degenerate && options.haldane_correction) {
    ca += 0.5;
    cb += 0.5;
    cc += 0.5;
    cd += 0.5;
  }
  if (r.degenerate && !options.haldane_correction) {
    const double num = ca * cd, den = cb * cc;
    r.odds_ratio = (num == 0.0 && den == 0.0) ? nan : num / den;
    r.log_or = std::log(r.odds_ratio);
    r.ci_low = r.ci_high = nan;
    r.significant = false;
    return r;
  }
  // Grouping the terms as (a, d) and (b, c) makes swapping the corpora negate
  // log_or bit-for-bit and leave se unchanged.
  r.odds_ratio = (ca * cd) / (cb * cc);
  r.log_or = (std::log(ca) + std::log(cd)) - (std::log(cb) + std::log(cc));
  const double se = std::sqrt((1.0 / ca + 1.0 / cd) + (1.0 / cb + 1.0 / cc));
  const double z = normal_critical_value(options.alpha);
  r.ci_low = std::exp(r.log_or - z * se);
  r.ci_high = std::exp(r.log_or + z * se);
  r.significant = r.ci_low > 1.0 || r.ci_high < 1.0;
  return r;
}

std::vector<OddsRatioRecord> odds_ratios(const FrequencyTable& cause, const FrequencyTable& control,
                                         const std::vector<std::string>& items,
                                         const OddsRatioOptions& options) {
  if (cause.kind != control.kind) throw std::invalid_argument("odds ratios need tables of the same kind");
  std::vector<OddsRatioRecord> out;
  out.reserve(items.size());
  for (const auto& item : items) {
    const std::int64_t a = cause.f(item), c = control.f(item);
    out.push_back(odds_ratio(item, a, cause.total - a, c, control.total - c, options));
  }
  return out;
}

std::vector<std::string> shared_vocabulary(const FrequencyTable& a, const FrequencyTable& b) {
  std::set<std::string> items;
  for (const auto& [item, n] : a.counts) items.insert(item);
  for (const auto& [item, n] : b.counts) items.insert(item);
  return {items.begin(), items.end()};
}

std::vector<std::string> unigram_candidates(const FrequencyTable& cause, const FrequencyTable& control,
                                            const TfIdfOptions& options, CandidatePooling pooling) {
  auto x = tfidf_filter(cause, options);
  auto y = tfidf_filter(control, options);
  std::vector<std::string> out;
  if (pooling == CandidatePooling::Union) {
    std::set_union(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
  } else {
    std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
  }
  return out;
}

// ---------------------------------------------------------------------------

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
  if (x.size() < 2) throw DataError("pearson correlation needs at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw DataError("pearson correlation undefined for a constant vector");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::string variant_name(bool keep_punctuation, bool keep_casing) {
  return std::string(keep_punctuation ? "punct" : "nopunct") + "+" + (keep_casing ? "cased" : "lower");
}

VariantComparison compare_variants(const VariantOdds& a, const VariantOdds& b) {
  VariantComparison cmp;
  cmp.variant_a = variant_name(a.keep_punctuation, a.keep_casing);
  cmp.variant_b = variant_name(b.keep_punctuation, b.keep_casing);
  std::map<std::string, const OddsRatioRecord*> left, right;
  for (const auto& r : a.records) left[r.item] = &r;
  for (const auto& r : b.records) right[r.item] = &r;
  std::set<std::string> all;
  for (const auto& [k, v] : left) all.insert(k);
  for (const auto& [k, v] : right) all.insert(k);
  auto usable = [](const OddsRatioRecord* r) { return r && !r->degenerate && std::isfinite(r->log_or); };
  for (const auto& tag : all) {
    auto l = left.contains(tag) ? left[tag] : nullptr;
    auto r = right.contains(tag) ? right[tag] : nullptr;
    if (usable(l) && usable(r)) {
      cmp.tags.push_back(tag);
      cmp.log_or_a.push_back(l->log_or);
      cmp.log_or_b.push_back(r->log_or);
    } else {
      cmp.dropped.push_back(tag);
    }
  }
  if (cmp.tags.size() < 3) {
    throw DataError("variant comparison " + cmp.variant_a + " vs " + cmp.variant_b + " has only " +
                    std::to_string(cmp.tags.size()) + " shared non-degenerate tags");
  }
  cmp.pearson_rho = pearson(cmp.log_or_a, cmp.log_or_b);
  return cmp;
}

}  // namespace causal
