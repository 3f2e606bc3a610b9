#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "causal/document.hpp"

namespace causal {

enum class Direction { Forward, Backward };
enum class NGramCountMode { Occurrences, Documents };

const char* to_string(Direction d);

/// Counts of every within-document contiguous n-gram of tokens_lower,
/// 1 <= n <= max_n. Under NGramCountMode::Documents an n-gram contributes at
/// most once per document.
class NGramIndex {
 public:
  NGramIndex() = default;
  explicit NGramIndex(std::size_t max_n, NGramCountMode mode = NGramCountMode::Occurrences);

  std::size_t max_n() const { return levels_.size(); }
  NGramCountMode mode() const { return mode_; }
  std::int64_t num_docs() const { return num_docs_; }

  std::int64_t count(const std::vector<std::string>& ngram) const;

  /// One-token extensions of `ngram` (appended for Forward, prepended for
  /// Backward) paired with the count of the extended n-gram.
  std::vector<std::pair<std::string, std::int64_t>> extensions(const std::vector<std::string>& ngram,
                                                               Direction direction) const;

  void add_document(const std::vector<std::string>& tokens);
  void merge(const NGramIndex& other);

  std::size_t size() const;

 private:
  NGramCountMode mode_ = NGramCountMode::Occurrences;
  // levels_[n - 1] maps space-joined n-grams to counts.
  std::vector<std::unordered_map<std::string, std::int64_t>> levels_;
  std::int64_t num_docs_ = 0;
};

NGramIndex build_index(const Corpus& corpus, std::size_t max_n,
                       NGramCountMode mode = NGramCountMode::Occurrences, std::size_t threads = 1);

struct CauseTreeNode {
  std::vector<std::string> ngram;
  std::int64_t count = 0;
  std::optional<double> rate;
  std::vector<CauseTreeNode> children;
};

struct CauseTree {
  std::string root_word;
  Direction direction = Direction::Forward;
  std::int64_t num_docs = 0;
  CauseTreeNode root;
  /// Per-document rate count / D of every 4-gram node, keyed by the space-joined 4-gram.
  std::map<std::string, double> rates;
};

/// Grows the tree breadth-first: every frontier n-gram keeps its top `branch`
/// one-token extensions by count (ties lexicographic on the new token) until
/// `max_depth` extensions have been made or no extension exists.
CauseTree grow_tree(const NGramIndex& index, const std::string& root, Direction direction,
                    std::size_t max_depth = 3, std::size_t branch = 2);

std::string join_ngram(const std::vector<std::string>& ngram);

/// {"ngram", "count", "rate"?, "children"} recursively.
std::string tree_to_json(const CauseTree& tree, int indent = -1);

}  // namespace causal
