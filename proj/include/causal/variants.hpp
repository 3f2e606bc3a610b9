#pragma once

#include <vector>

#include "causal/ingest.hpp"
#include "causal/stats.hpp"
#include "causal/tagger.hpp"

namespace causal {

struct VariantStudy {
  /// Order: (punct, cased), (nopunct, cased), (punct, lower), (nopunct, lower).
  std::vector<VariantOdds> variants;
  /// Punctuation kept vs removed, first with casing kept, then with casing removed.
  std::vector<VariantComparison> comparisons;
};

/// Re-preprocesses the same raw causal and control posts under the four
/// punctuation x casing settings, tags each with `model`, and correlates the
/// POS log odds ratios of punctuation-kept against punctuation-removed text.
VariantStudy variant_study(const std::vector<RawDocument>& causal_raw,
                           const std::vector<RawDocument>& control_raw, const PerceptronModel& model,
                           const OddsRatioOptions& options = {}, std::size_t threads = 1);

}  // namespace causal
