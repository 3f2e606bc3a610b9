#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "causal/document.hpp"

namespace causal {

// ---------------------------------------------------------------------------
// Averaged perceptron (multiclass, sparse binary features)

class AveragedPerceptron {
 public:
  AveragedPerceptron() = default;
  /// `classes` is sorted and deduplicated; class indices refer to that order.
  explicit AveragedPerceptron(std::vector<std::string> classes);

  const std::vector<std::string>& classes() const { return classes_; }

  /// Highest-scoring class; ties go to the lowest class index.
  std::size_t predict(std::span<const std::string> features) const;

  /// Records one training step. When guess != truth, adds +1 to the truth
  /// class and -1 to the guessed class for every feature.
  void update(std::size_t truth, std::size_t guess, std::span<const std::string> features);

  /// Replaces every weight by its mean value over all steps recorded so far.
  void average();

  double weight(const std::string& feature, std::size_t cls) const;
  std::uint64_t steps() const { return steps_; }

  const std::unordered_map<std::string, std::vector<double>>& weights() const { return weights_; }
  void set_weights(std::unordered_map<std::string, std::vector<double>> weights);

 private:
  struct Accumulator {
    double total = 0.0;
    std::uint64_t stamp = 0;
  };
  std::vector<std::string> classes_;
  std::unordered_map<std::string, std::vector<double>> weights_;
  std::unordered_map<std::string, std::vector<Accumulator>> accumulators_;
  std::uint64_t steps_ = 0;
};

// ---------------------------------------------------------------------------
// POS tagger

inline constexpr int kFeatureTemplateVersion = 1;

struct TaggedSentence {
  std::vector<std::string> tokens;
  std::vector<std::string> tags;
};

/// Feature strings for position i given the two previously assigned tags.
std::vector<std::string> tagger_features(const std::vector<std::string>& tokens, std::size_t i,
                                         const std::string& prev_tag, const std::string& prev2_tag);

struct TrainOptions {
  int epochs = 5;
  std::uint64_t seed = 0;
  /// Words seen at least this often, always with the same gold tag, bypass the classifier.
  std::size_t single_tag_min_count = 20;
};

class PerceptronModel {
 public:
  PerceptronModel() = default;

  /// Greedy left-to-right tagging.
  std::vector<std::string> tag(const std::vector<std::string>& tokens) const;

  const std::vector<std::string>& tag_set() const { return perceptron_.classes(); }
  const std::map<std::string, std::string>& single_tag_words() const { return single_tag_words_; }
  int epochs_trained() const { return epochs_trained_; }
  double weight(const std::string& feature, const std::string& tag) const;

  void save(const std::string& path) const;
  static PerceptronModel load(const std::string& path);
  std::string to_json() const;
  static PerceptronModel from_json(const std::string& text);

  friend PerceptronModel train(const std::vector<TaggedSentence>& corpus, const TrainOptions& options);

 private:
  AveragedPerceptron perceptron_;
  std::map<std::string, std::string> single_tag_words_;
  int epochs_trained_ = 0;
};

/// Trains on `corpus`, shuffling sentence order each epoch with `seed`.
/// Throws std::invalid_argument for epochs < 1 and DataError for an empty
/// corpus or a sentence whose tag list is not parallel to its tokens.
PerceptronModel train(const std::vector<TaggedSentence>& corpus, const TrainOptions& options);

/// Tags tokens_cased and stores the result in pos_tags.
Document tag(const PerceptronModel& model, Document doc);

/// Tagging accuracy of `model` on `corpus` (token level).
double accuracy(const PerceptronModel& model, const std::vector<TaggedSentence>& corpus);

/// One sentence per line, tokens written as word/TAG (split at the last '/').
std::vector<TaggedSentence> read_treebank(const std::string& path);

// ---------------------------------------------------------------------------
// Imported annotations

enum class AnnotationKind { Pos, Ne };

const char* to_string(AnnotationKind kind);

inline const std::set<std::string>& ne_labels() {
  static const std::set<std::string> labels{"Organization", "Location", "Person", "Misc", "O"};
  return labels;
}

struct AnnotationEntry {
  std::string id;
  AnnotationKind kind = AnnotationKind::Pos;
  std::vector<std::string> tags;
};

/// TSV rows: id, kind ("pos" or "ne"), space-separated tags. NE labels are
/// matched case-insensitively and stored in canonical spelling.
std::vector<AnnotationEntry> read_annotations(const std::string& path);

struct ImportReport {
  std::size_t documents = 0;
  std::size_t attached_pos = 0;
  std::size_t attached_ne = 0;
  std::size_t unknown_ids = 0;
  std::vector<std::string> errors;

  double pos_coverage() const;
  double ne_coverage() const;
};

/// Attaches tags to matching documents. Rows whose length differs from the
/// document's token count (or with invalid NE labels) are rejected and listed
/// in `errors`; rows for ids absent from the corpus are counted as unknown.
ImportReport import_annotations(Corpus& corpus, const std::vector<AnnotationEntry>& entries);

struct EntityMention {
  std::string type;
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Maximal runs of identical non-O labels.
std::vector<EntityMention> entity_mentions(const std::vector<std::string>& ne_tags);

}  // namespace causal
