#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "causal/document.hpp"

namespace causal {

struct SelectionRules {
  std::set<std::string> cause_words{"caused", "causes", "causing"};
  std::vector<std::string> bidirectional_stems{"associat", "relat", "connect", "correlat"};
  std::int64_t bin_width_seconds = 15 * 60;
  std::uint64_t rng_seed = 0;

  /// Throws std::invalid_argument if cause words are not lowercase or the bin width is not positive.
  void validate() const;
};

enum class DocClass { Causal, ControlEligible, Excluded };

const char* to_string(DocClass c);

/// Causal: exactly one cause-word occurrence and no bidirectional stem.
/// ControlEligible: neither. Excluded: everything else.
DocClass classify(const Document& doc, const SelectionRules& rules);

struct BinCounts {
  std::size_t causal = 0;
  std::size_t control = 0;
  std::size_t shortfall = 0;
};

struct CorpusPair {
  Corpus causal;
  Corpus control;
  /// Keyed by bin start; only bins holding at least one causal document.
  std::map<Timestamp, BinCounts> per_bin;

  std::size_t eligible = 0;
  std::size_t excluded = 0;

  std::size_t total_shortfall() const;
};

/// Keeps every causal document and, per clock-aligned time bin, samples
/// without replacement as many control-eligible documents as there are
/// causal ones. Each bin draws from its own generator seeded by
/// (rng_seed, bin_start) over its documents sorted by id, so the result is
/// independent of input order and of the thread count. Both output corpora
/// are ordered by (bin, id).
CorpusPair build_corpus_pair(const Corpus& docs, const SelectionRules& rules, std::size_t threads = 1);

}  // namespace causal
