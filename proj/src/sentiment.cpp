#include "causal/sentiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include <boost/math/distributions/students_t.hpp>

#include "causal/text.hpp"

namespace causal {

namespace {

std::optional<double> parse_double(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

SentimentLexicon::SentimentLexicon(std::unordered_map<std::string, double> raw_scores)
    : raw_(std::move(raw_scores)) {
  if (raw_.empty()) throw DataError("sentiment lexicon is empty");
  // Sum in sorted word order so the mean does not depend on hash layout.
  std::vector<std::pair<std::string, double>> sorted(raw_.begin(), raw_.end());
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (const auto& [w, s] : sorted) sum += s;
  mean_raw_ = sum / static_cast<double>(sorted.size());
  min_ = std::numeric_limits<double>::infinity();
  max_ = -std::numeric_limits<double>::infinity();
  for (const auto& [w, s] : sorted) {
    const double r = s - mean_raw_;
    scores_.emplace(w, r);
    min_ = std::min(min_, r);
    max_ = std::max(max_, r);
  }
}

SentimentLexicon SentimentLexicon::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read lexicon " + path);
  std::unordered_map<std::string, double> raw;
  std::string line;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto tab = line.find('\t');
    const bool header_allowed = first_content;
    first_content = false;
    if (tab == std::string::npos) {
      if (header_allowed) continue;
      throw DataError(path + ":" + std::to_string(line_no) + ": expected word<TAB>score");
    }
    std::string rest = line.substr(tab + 1);
    auto next_tab = rest.find('\t');
    if (next_tab != std::string::npos) rest.resize(next_tab);
    auto score = parse_double(rest);
    if (!score) {
      if (header_allowed) continue;
      throw DataError(path + ":" + std::to_string(line_no) + ": score '" + rest + "' is not a number");
    }
    raw[text::to_lower(line.substr(0, tab))] = *score;
  }
  return SentimentLexicon(std::move(raw));
}

double SentimentLexicon::score(const std::string& word) const { return scores_.at(word); }

double SentimentLexicon::raw_score(const std::string& word) const { return raw_.at(word); }

ScoredVocabulary scored_vocabulary(const FrequencyTable& table, const SentimentLexicon& lexicon,
                                   double percentile) {
  ScoredVocabulary vocab;
  std::int64_t covered = 0;
  for (const auto& word : above_tfidf_percentile(table, percentile)) {
    if (!lexicon.contains(word)) continue;
    vocab.words.insert(word);
    covered += table.f(word);
  }
  vocab.coverage = table.total == 0 ? 0.0 : static_cast<double>(covered) / static_cast<double>(table.total);
  return vocab;
}

double corpus_mean_score(const FrequencyTable& table, const ScoredVocabulary& vocab,
                         const SentimentLexicon& lexicon) {
  if (vocab.words.empty()) throw DataError("scored vocabulary is empty");
  double numerator = 0.0;
  double denominator = 0.0;
  for (const auto& word : vocab.words) {
    const auto f = static_cast<double>(table.f(word));
    numerator += f * lexicon.score(word);
    denominator += f;
  }
  if (denominator == 0.0) throw DataError("scored vocabulary has no occurrences in the corpus");
  return numerator / denominator;
}

// ---------------------------------------------------------------------------

const char* to_string(PosClass c) {
  switch (c) {
    case PosClass::Noun: return "noun";
    case PosClass::Verb: return "verb";
    case PosClass::Adjective: return "adjective";
  }
  return "?";
}

bool in_class(const std::string& pos_tag, PosClass c) {
  switch (c) {
    case PosClass::Noun: return pos_tag.starts_with("NN");
    case PosClass::Verb: return pos_tag.starts_with("VB");
    case PosClass::Adjective: return pos_tag.starts_with("JJ");
  }
  return false;
}

HistogramSpec HistogramSpec::for_lexicon(const SentimentLexicon& lexicon, std::size_t bins) {
  HistogramSpec spec;
  spec.low = lexicon.min_score();
  spec.high = lexicon.max_score();
  if (spec.high <= spec.low) spec.high = spec.low + 1.0;
  spec.bins = bins;
  return spec;
}

std::size_t HistogramSpec::bin_of(double value) const {
  if (bins == 0 || !(high > low)) throw std::invalid_argument("invalid histogram spec");
  if (value <= low) return 0;
  if (value >= high) return bins - 1;
  auto b = static_cast<std::size_t>((value - low) / (high - low) * static_cast<double>(bins));
  return std::min(b, bins - 1);
}

double Histogram::total_weight() const {
  double sum = 0.0;
  for (double w : weights) sum += w;
  return sum;
}

void Histogram::merge(const Histogram& other) {
  if (other.weights.size() != weights.size()) throw std::invalid_argument("histogram shape mismatch");
  for (std::size_t i = 0; i < weights.size(); ++i) weights[i] += other.weights[i];
  excluded_tokens += other.excluded_tokens;
}

Histogram score_distribution(const Corpus& corpus, const ScoredVocabulary& vocab,
                             const SentimentLexicon& lexicon, const HistogramSpec& spec,
                             std::optional<PosClass> pos_filter, Weighting weighting, std::size_t threads) {
  if (spec.bins == 0 || !(spec.high > spec.low)) throw std::invalid_argument("invalid histogram spec");

  struct Partial {
    Histogram hist;
    std::int64_t scored_tokens = 0;
    std::int64_t filtered_tokens = 0;
    std::set<std::string> filtered_types;
    std::set<std::string> scored_types;
  };
  std::vector<Partial> partial(shard_count(corpus.size(), threads));
  for (auto& p : partial) {
    p.hist.spec = spec;
    p.hist.weights.assign(spec.bins, 0.0);
  }
  for_each_shard(corpus.size(), threads, [&](std::size_t begin, std::size_t end, std::size_t shard) {
    Partial& p = partial[shard];
    for (std::size_t d = begin; d < end; ++d) {
      const Document& doc = corpus[d];
      if (pos_filter && !doc.pos_tags) throw DataError("document " + doc.id + " has no pos tags");
      for (std::size_t i = 0; i < doc.size(); ++i) {
        const std::string& word = doc.tokens_lower[i];
        if (!vocab.words.contains(word)) {
          ++p.hist.excluded_tokens;
          continue;
        }
        ++p.scored_tokens;
        p.scored_types.insert(word);
        if (pos_filter && !in_class((*doc.pos_tags)[i], *pos_filter)) {
          ++p.hist.excluded_tokens;
          continue;
        }
        ++p.filtered_tokens;
        if (weighting == Weighting::Token) {
          p.hist.weights[spec.bin_of(lexicon.score(word))] += 1.0;
        } else {
          p.filtered_types.insert(word);
        }
      }
    }
  });

  Histogram result;
  result.spec = spec;
  result.weights.assign(spec.bins, 0.0);
  std::int64_t scored = 0, filtered = 0;
  std::set<std::string> filtered_types, scored_types;
  for (const auto& p : partial) {
    result.merge(p.hist);
    scored += p.scored_tokens;
    filtered += p.filtered_tokens;
    filtered_types.insert(p.filtered_types.begin(), p.filtered_types.end());
    scored_types.insert(p.scored_types.begin(), p.scored_types.end());
  }
  if (weighting == Weighting::Type) {
    for (const auto& word : filtered_types) result.weights[spec.bin_of(lexicon.score(word))] += 1.0;
    result.filter_fraction = scored_types.empty() ? 0.0
                                                  : static_cast<double>(filtered_types.size()) /
                                                        static_cast<double>(scored_types.size());
  } else {
    result.filter_fraction = scored == 0 ? 0.0 : static_cast<double>(filtered) / static_cast<double>(scored);
  }
  return result;
}

// ---------------------------------------------------------------------------

WeightedSample token_scores(const FrequencyTable& table, const ScoredVocabulary& vocab,
                            const SentimentLexicon& lexicon) {
  WeightedSample sample;
  for (const auto& word : vocab.words) {
    const auto f = table.f(word);
    if (f > 0) sample[lexicon.score(word)] += f;
  }
  return sample;
}

namespace {

struct Moments {
  double n = 0.0;
  double mean = 0.0;
  double var = 0.0;
};

Moments moments(const WeightedSample& s) {
  Moments m;
  for (const auto& [x, w] : s) {
    if (w < 0) throw std::invalid_argument("negative sample weight");
    m.n += static_cast<double>(w);
    m.mean += static_cast<double>(w) * x;
  }
  if (m.n < 2.0) throw DataError("t-test needs at least two observations per sample");
  m.mean /= m.n;
  double ss = 0.0;
  for (const auto& [x, w] : s) ss += static_cast<double>(w) * (x - m.mean) * (x - m.mean);
  m.var = ss / (m.n - 1.0);
  return m;
}

}  // namespace

TTestResult welch_t_test(const WeightedSample& a, const WeightedSample& b) {
  const Moments ma = moments(a);
  const Moments mb = moments(b);
  if (ma.var == 0.0 && mb.var == 0.0) throw DataError("t-test undefined: both samples have zero variance");
  const double va = ma.var / ma.n, vb = mb.var / mb.n;
  TTestResult r;
  r.mean_a = ma.mean;
  r.mean_b = mb.mean;
  r.n_a = static_cast<std::int64_t>(ma.n);
  r.n_b = static_cast<std::int64_t>(mb.n);
  r.t = (ma.mean - mb.mean) / std::sqrt(va + vb);
  r.df = (va + vb) * (va + vb) / (va * va / (ma.n - 1.0) + vb * vb / (mb.n - 1.0));
  boost::math::students_t_distribution<double> dist(r.df);
  r.p = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(r.t))));
  return r;
}

TTestResult welch_t_test(const std::vector<double>& a, const std::vector<double>& b) {
  WeightedSample wa, wb;
  for (double x : a) ++wa[x];
  for (double x : b) ++wb[x];
  return welch_t_test(wa, wb);
}

// ---------------------------------------------------------------------------

const char* to_string(SentimentClass c) {
  switch (c) {
    case SentimentClass::VeryNegative: return "very negative";
    case SentimentClass::Negative: return "negative";
    case SentimentClass::Neutral: return "neutral";
    case SentimentClass::Positive: return "positive";
    case SentimentClass::VeryPositive: return "very positive";
  }
  return "?";
}

std::optional<SentimentClass> parse_sentiment_class(const std::string& label) {
  std::string key;
  for (char c : text::to_lower(label)) {
    if (c != ' ' && c != '_' && c != '-' && c != '\t' && c != '\r') key.push_back(c);
  }
  if (key == "verynegative" || key == "0") return SentimentClass::VeryNegative;
  if (key == "negative" || key == "1") return SentimentClass::Negative;
  if (key == "neutral" || key == "2") return SentimentClass::Neutral;
  if (key == "positive" || key == "3") return SentimentClass::Positive;
  if (key == "verypositive" || key == "4") return SentimentClass::VeryPositive;
  return std::nullopt;
}

DocSentimentLabels read_sentiment_labels(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read sentiment labels " + path);
  DocSentimentLabels labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw DataError(path + ":" + std::to_string(line_no) + ": expected id<TAB>class");
    auto cls = parse_sentiment_class(line.substr(tab + 1));
    if (!cls) throw DataError(path + ":" + std::to_string(line_no) + ": unknown sentiment class '" +
                              line.substr(tab + 1) + "'");
    labels[line.substr(0, tab)] = *cls;
  }
  return labels;
}

ClassDistribution class_distribution(const DocSentimentLabels& labels, const Corpus& corpus) {
  ClassDistribution dist;
  std::unordered_set<std::string> ids;
  for (const auto& doc : corpus) {
    ids.insert(doc.id);
    auto it = labels.find(doc.id);
    if (it == labels.end()) {
      ++dist.unlabeled;
      continue;
    }
    ++dist.labeled;
    ++dist.counts[static_cast<std::size_t>(it->second)];
  }
  for (const auto& [id, cls] : labels) {
    if (!ids.contains(id)) ++dist.unknown_ids;
  }
  if (dist.labeled == 0) throw DataError("no corpus document carries a sentiment label");
  for (std::size_t i = 0; i < 5; ++i) {
    dist.proportions[i] = static_cast<double>(dist.counts[i]) / static_cast<double>(dist.labeled);
  }
  return dist;
}

}  // namespace causal
