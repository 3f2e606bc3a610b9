#include "causal/lda.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace causal {

void LdaConfig::validate() const {
  if (topics < 1) throw std::invalid_argument("lda topics must be >= 1");
  if (!(alpha_sum > 0.0)) throw std::invalid_argument("lda alpha_sum must be > 0");
  if (!(beta > 0.0)) throw std::invalid_argument("lda beta must be > 0");
  if (iterations < 1) throw std::invalid_argument("lda iterations must be >= 1");
  if (vocab_min_count < 1) throw std::invalid_argument("lda vocab_min_count must be >= 1");
}

bool check_invariants(const TopicModelState& s, std::string* why) {
  auto fail = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  const std::size_t K = s.topics();
  const std::size_t V = s.vocabulary.size();
  std::vector<std::int64_t> wt(V * K, 0), dt(s.doc_ids.size() * K, 0), t_tot(K, 0);
  for (std::size_t d = 0; d < s.words.size(); ++d) {
    if (s.z[d].size() != s.words[d].size()) return fail("z length differs from document length");
    for (std::size_t i = 0; i < s.words[d].size(); ++i) {
      const std::size_t t = s.z[d][i];
      if (t >= K) return fail("topic assignment out of range");
      ++wt[s.words[d][i] * K + t];
      ++dt[d * K + t];
      ++t_tot[t];
    }
  }
  if (wt != s.n_wt) return fail("word-topic counts disagree with assignments");
  if (dt != s.n_dt) return fail("document-topic counts disagree with assignments");
  if (t_tot != s.n_t) return fail("topic totals disagree with assignments");
  for (std::size_t t = 0; t < K; ++t) {
    std::int64_t col = 0;
    for (std::size_t w = 0; w < V; ++w) col += s.word_topic(w, t);
    if (col != s.n_t[t]) return fail("sum over words of n_wt differs from n_t");
  }
  for (std::size_t d = 0; d < s.words.size(); ++d) {
    std::int64_t row = 0;
    for (std::size_t t = 0; t < K; ++t) row += s.doc_topic(d, t);
    if (row != static_cast<std::int64_t>(s.words[d].size())) return fail("n_dt row differs from document length");
  }
  for (auto c : s.n_wt) if (c < 0) return fail("negative count");
  for (auto c : s.n_dt) if (c < 0) return fail("negative count");
  return true;
}

TopicModelState fit(const Corpus& corpus, const LdaConfig& config, const SweepObserver& observer) {
  config.validate();
  TopicModelState s;
  s.config = config;

  std::map<std::string, std::int64_t> freq;
  for (const auto& doc : corpus) {
    for (const auto& w : doc.tokens_lower) ++freq[w];
  }
  for (const auto& [w, n] : freq) {
    if (n >= config.vocab_min_count && !config.drop_words.contains(w)) s.vocabulary.push_back(w);
  }
  if (s.vocabulary.empty()) throw DataError("lda vocabulary is empty after pruning");

  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return corpus[a].id < corpus[b].id; });

  const std::size_t K = config.topics;
  const std::size_t V = s.vocabulary.size();
  const std::size_t D = corpus.size();
  s.n_wt.assign(V * K, 0);
  s.n_dt.assign(D * K, 0);
  s.n_t.assign(K, 0);
  s.words.resize(D);
  s.z.resize(D);

  std::vector<Rng> rngs;
  rngs.reserve(D);
  for (std::size_t d = 0; d < D; ++d) {
    const Document& doc = corpus[order[d]];
    s.doc_ids.push_back(doc.id);
    for (const auto& w : doc.tokens_lower) {
      auto it = std::lower_bound(s.vocabulary.begin(), s.vocabulary.end(), w);
      if (it != s.vocabulary.end() && *it == w) {
        s.words[d].push_back(static_cast<std::uint32_t>(it - s.vocabulary.begin()));
      }
    }
    rngs.push_back(make_rng(config.seed, {fnv1a64(doc.id)}));
    Rng& rng = rngs.back();
    for (auto w : s.words[d]) {
      const auto t = static_cast<std::uint32_t>(uniform_below(rng, K));
      s.z[d].push_back(t);
      ++s.n_wt[w * K + t];
      ++s.n_dt[d * K + t];
      ++s.n_t[t];
    }
  }

  const double alpha = config.alpha();
  const double beta = config.beta;
  const double beta_v = beta * static_cast<double>(V);
  std::vector<double> cumulative(K);

  for (int iter = 1; iter <= config.iterations; ++iter) {
    for (std::size_t d = 0; d < D; ++d) {
      Rng& rng = rngs[d];
      std::int64_t* doc_counts = &s.n_dt[d * K];
      for (std::size_t i = 0; i < s.words[d].size(); ++i) {
        const std::size_t w = s.words[d][i];
        std::int64_t* word_counts = &s.n_wt[w * K];
        std::size_t t = s.z[d][i];
        --word_counts[t];
        --doc_counts[t];
        --s.n_t[t];
        double total = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
          total += (static_cast<double>(word_counts[k]) + beta) / (static_cast<double>(s.n_t[k]) + beta_v) *
                   (static_cast<double>(doc_counts[k]) + alpha);
          cumulative[k] = total;
        }
        const double u = uniform01(rng) * total;
        t = 0;
        while (t + 1 < K && cumulative[t] <= u) ++t;
        s.z[d][i] = static_cast<std::uint32_t>(t);
        ++word_counts[t];
        ++doc_counts[t];
        ++s.n_t[t];
      }
    }
    s.iterations_done = iter;
    std::string why;
    if (!check_invariants(s, &why)) {
      throw std::logic_error("lda count invariant violated after sweep " + std::to_string(iter) + ": " + why);
    }
    ++s.invariant_checks;
    if (observer) observer(iter, s);
  }
  return s;
}

TopicReport report(const TopicModelState& s, std::size_t top_m) {
  if (top_m < 1) throw std::invalid_argument("top_m must be >= 1");
  const std::size_t K = s.topics();
  const std::size_t V = s.vocabulary.size();
  const double alpha = s.config.alpha();
  const double beta = s.config.beta;

  TopicReport r;
  r.vocabulary = s.vocabulary;
  r.doc_ids = s.doc_ids;
  r.phi.assign(K, std::vector<double>(V));
  for (std::size_t t = 0; t < K; ++t) {
    const double denom = static_cast<double>(s.n_t[t]) + beta * static_cast<double>(V);
    for (std::size_t w = 0; w < V; ++w) r.phi[t][w] = (static_cast<double>(s.word_topic(w, t)) + beta) / denom;
  }
  r.theta.assign(s.doc_ids.size(), std::vector<double>(K));
  for (std::size_t d = 0; d < s.doc_ids.size(); ++d) {
    const double denom = static_cast<double>(s.words[d].size()) + alpha * static_cast<double>(K);
    for (std::size_t t = 0; t < K; ++t) r.theta[d][t] = (static_cast<double>(s.doc_topic(d, t)) + alpha) / denom;
  }
  r.top_words.resize(K);
  std::vector<std::size_t> ids(V);
  for (std::size_t t = 0; t < K; ++t) {
    std::iota(ids.begin(), ids.end(), 0);
    // phi is monotone in n_wt within a topic, so integer counts give an exact ranking.
    std::sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) {
      const auto ca = s.word_topic(a, t), cb = s.word_topic(b, t);
      return ca != cb ? ca > cb : s.vocabulary[a] < s.vocabulary[b];
    });
    for (std::size_t i = 0; i < ids.size() && i < top_m; ++i) {
      r.top_words[t].push_back({s.vocabulary[ids[i]], r.phi[t][ids[i]]});
    }
  }
  return r;
}

}  // namespace causal
