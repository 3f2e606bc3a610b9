#include "causal/variants.hpp"

namespace causal {

namespace {

Corpus prepare(const std::vector<RawDocument>& raw, PreprocessOptions pre, const PerceptronModel& model,
               std::size_t threads) {
  Corpus corpus(raw.size());
  for_each_shard(raw.size(), threads, [&](std::size_t begin, std::size_t end, std::size_t) {
    for (std::size_t i = begin; i < end; ++i) corpus[i] = tag(model, preprocess(raw[i], pre));
  });
  return corpus;
}

}  // namespace

VariantStudy variant_study(const std::vector<RawDocument>& causal_raw,
                           const std::vector<RawDocument>& control_raw, const PerceptronModel& model,
                           const OddsRatioOptions& options, std::size_t threads) {
  VariantStudy study;
  for (bool casing : {true, false}) {
    for (bool punct : {true, false}) {
      PreprocessOptions pre{punct, casing};
      auto cause = count(prepare(causal_raw, pre, model, threads), ItemKind::Pos, threads);
      auto control = count(prepare(control_raw, pre, model, threads), ItemKind::Pos, threads);
      VariantOdds v;
      v.keep_punctuation = punct;
      v.keep_casing = casing;
      v.records = odds_ratios(cause, control, shared_vocabulary(cause, control), options);
      study.variants.push_back(std::move(v));
    }
  }
  study.comparisons.push_back(compare_variants(study.variants[0], study.variants[1]));
  study.comparisons.push_back(compare_variants(study.variants[2], study.variants[3]));
  return study;
}

}  // namespace causal
