#include "causal/select.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "causal/text.hpp"

namespace causal {

void SelectionRules::validate() const {
  if (bin_width_seconds <= 0) throw std::invalid_argument("bin_width must be positive");
  for (const auto& w : cause_words) {
    if (w.empty() || text::to_lower(w) != w) {
      throw std::invalid_argument("cause word '" + w + "' must be nonempty lowercase");
    }
  }
}

const char* to_string(DocClass c) {
  switch (c) {
    case DocClass::Causal: return "causal";
    case DocClass::ControlEligible: return "control-eligible";
    case DocClass::Excluded: return "excluded";
  }
  return "?";
}

DocClass classify(const Document& doc, const SelectionRules& rules) {
  std::size_t cause_hits = 0;
  for (const auto& token : doc.tokens_lower) {
    if (rules.cause_words.contains(token)) ++cause_hits;
    for (const auto& stem : rules.bidirectional_stems) {
      if (token.starts_with(stem)) return DocClass::Excluded;
    }
  }
  if (cause_hits == 1) return DocClass::Causal;
  if (cause_hits == 0) return DocClass::ControlEligible;
  return DocClass::Excluded;
}

std::size_t CorpusPair::total_shortfall() const {
  std::size_t total = 0;
  for (const auto& [bin, counts] : per_bin) total += counts.shortfall;
  return total;
}

namespace {

struct Bin {
  Timestamp start = 0;
  std::vector<const Document*> causal;
  std::vector<const Document*> eligible;
  std::vector<const Document*> chosen;
};

bool by_id(const Document* a, const Document* b) { return a->id < b->id; }

}  // namespace

CorpusPair build_corpus_pair(const Corpus& docs, const SelectionRules& rules, std::size_t threads) {
  rules.validate();
  CorpusPair pair;

  std::vector<DocClass> classes(docs.size());
  for_each_shard(docs.size(), threads, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t i = begin; i < end; ++i) classes[i] = classify(docs[i], rules);
  });

  std::map<Timestamp, Bin> bins;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (classes[i] == DocClass::Excluded) {
      ++pair.excluded;
      continue;
    }
    Timestamp start = truncate_to_bin(docs[i].timestamp, rules.bin_width_seconds);
    Bin& bin = bins[start];
    bin.start = start;
    if (classes[i] == DocClass::Causal) {
      bin.causal.push_back(&docs[i]);
    } else {
      ++pair.eligible;
      bin.eligible.push_back(&docs[i]);
    }
  }

  std::vector<Bin*> active;
  for (auto& [start, bin] : bins) {
    if (!bin.causal.empty()) active.push_back(&bin);
  }

  for_each_shard(active.size(), threads, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t i = begin; i < end; ++i) {
      Bin& bin = *active[i];
      std::sort(bin.causal.begin(), bin.causal.end(), by_id);
      std::sort(bin.eligible.begin(), bin.eligible.end(), by_id);
      const std::size_t want = bin.causal.size();
      if (bin.eligible.size() <= want) {
        bin.chosen = bin.eligible;
      } else {
        // Partial Fisher-Yates: the first `want` slots become the sample.
        Rng rng = make_rng(rules.rng_seed, {static_cast<std::uint64_t>(bin.start)});
        std::vector<const Document*> pool = bin.eligible;
        for (std::size_t k = 0; k < want; ++k) {
          std::size_t j = k + uniform_below(rng, pool.size() - k);
          std::swap(pool[k], pool[j]);
        }
        pool.resize(want);
        std::sort(pool.begin(), pool.end(), by_id);
        bin.chosen = std::move(pool);
      }
    }
  });

  for (Bin* bin : active) {
    BinCounts counts;
    counts.causal = bin->causal.size();
    counts.control = bin->chosen.size();
    counts.shortfall = counts.causal - counts.control;
    pair.per_bin[bin->start] = counts;
    for (const Document* d : bin->causal) pair.causal.push_back(*d);
    for (const Document* d : bin->chosen) pair.control.push_back(*d);
  }
  return pair;
}

}  // namespace causal
