#include "causal/causetree.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace causal {

const char* to_string(Direction d) { return d == Direction::Forward ? "forward" : "backward"; }

std::string join_ngram(const std::vector<std::string>& ngram) {
  std::string key;
  for (std::size_t i = 0; i < ngram.size(); ++i) {
    if (i) key.push_back(' ');
    key += ngram[i];
  }
  return key;
}

NGramIndex::NGramIndex(std::size_t max_n, NGramCountMode mode) : mode_(mode), levels_(max_n) {
  if (max_n < 1) throw std::invalid_argument("max_n must be >= 1");
}

std::int64_t NGramIndex::count(const std::vector<std::string>& ngram) const {
  if (ngram.empty() || ngram.size() > levels_.size()) return 0;
  const auto& level = levels_[ngram.size() - 1];
  auto it = level.find(join_ngram(ngram));
  return it == level.end() ? 0 : it->second;
}

std::vector<std::pair<std::string, std::int64_t>> NGramIndex::extensions(
    const std::vector<std::string>& ngram, Direction direction) const {
  std::vector<std::pair<std::string, std::int64_t>> out;
  if (ngram.empty() || ngram.size() >= levels_.size()) return out;
  const std::string key = join_ngram(ngram);
  for (const auto& [gram, n] : levels_[ngram.size()]) {
    if (gram.size() <= key.size() + 1) continue;
    if (direction == Direction::Forward) {
      if (gram.compare(0, key.size(), key) == 0 && gram[key.size()] == ' ') {
        out.emplace_back(gram.substr(key.size() + 1), n);
      }
    } else {
      const std::size_t split = gram.size() - key.size() - 1;
      if (gram.compare(split + 1, key.size(), key) == 0 && gram[split] == ' ') {
        out.emplace_back(gram.substr(0, split), n);
      }
    }
  }
  return out;
}

void NGramIndex::add_document(const std::vector<std::string>& tokens) {
  ++num_docs_;
  for (std::size_t n = 1; n <= levels_.size(); ++n) {
    if (tokens.size() < n) break;
    auto& level = levels_[n - 1];
    std::set<std::string> seen;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
      std::string key = join_ngram({tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                    tokens.begin() + static_cast<std::ptrdiff_t>(i + n)});
      if (mode_ == NGramCountMode::Documents && !seen.insert(key).second) continue;
      ++level[key];
    }
  }
}

void NGramIndex::merge(const NGramIndex& other) {
  if (other.levels_.size() != levels_.size() || other.mode_ != mode_) {
    throw std::invalid_argument("cannot merge n-gram indexes with different settings");
  }
  for (std::size_t n = 0; n < levels_.size(); ++n) {
    for (const auto& [gram, c] : other.levels_[n]) levels_[n][gram] += c;
  }
  num_docs_ += other.num_docs_;
}

std::size_t NGramIndex::size() const {
  std::size_t total = 0;
  for (const auto& level : levels_) total += level.size();
  return total;
}

NGramIndex build_index(const Corpus& corpus, std::size_t max_n, NGramCountMode mode, std::size_t threads) {
  NGramIndex index(max_n, mode);
  std::vector<NGramIndex> partial(shard_count(corpus.size(), threads), NGramIndex(max_n, mode));
  for_each_shard(corpus.size(), threads, [&](std::size_t begin, std::size_t end, std::size_t shard) {
    for (std::size_t i = begin; i < end; ++i) partial[shard].add_document(corpus[i].tokens_lower);
  });
  for (const auto& p : partial) index.merge(p);
  return index;
}

CauseTree grow_tree(const NGramIndex& index, const std::string& root, Direction direction,
                    std::size_t max_depth, std::size_t branch) {
  if (branch < 1) throw std::invalid_argument("branch must be >= 1");
  if (max_depth + 1 > index.max_n()) {
    throw std::invalid_argument("tree depth " + std::to_string(max_depth) + " needs an index with max_n >= " +
                                std::to_string(max_depth + 1));
  }
  const std::int64_t root_count = index.count({root});
  if (root_count == 0) throw DataError("root word '" + root + "' does not occur in the corpus");

  CauseTree tree;
  tree.root_word = root;
  tree.direction = direction;
  tree.num_docs = index.num_docs();
  tree.root.ngram = {root};
  tree.root.count = root_count;

  std::vector<CauseTreeNode*> frontier{&tree.root};
  for (std::size_t depth = 1; depth <= max_depth && !frontier.empty(); ++depth) {
    std::vector<CauseTreeNode*> next;
    for (CauseTreeNode* node : frontier) {
      auto ext = index.extensions(node->ngram, direction);
      std::sort(ext.begin(), ext.end(), [](const auto& x, const auto& y) {
        return x.second != y.second ? x.second > y.second : x.first < y.first;
      });
      if (ext.size() > branch) ext.resize(branch);
      node->children.reserve(ext.size());
      for (auto& [token, n] : ext) {
        CauseTreeNode child;
        child.ngram = node->ngram;
        if (direction == Direction::Forward) {
          child.ngram.push_back(token);
        } else {
          child.ngram.insert(child.ngram.begin(), token);
        }
        child.count = n;
        if (child.ngram.size() == 4) {
          child.rate = static_cast<double>(n) / static_cast<double>(tree.num_docs);
          tree.rates[join_ngram(child.ngram)] = *child.rate;
        }
        node->children.push_back(std::move(child));
      }
      for (auto& child : node->children) next.push_back(&child);
    }
    frontier = std::move(next);
  }
  return tree;
}

namespace {

nlohmann::json node_to_json(const CauseTreeNode& node) {
  nlohmann::json j;
  j["ngram"] = join_ngram(node.ngram);
  j["count"] = node.count;
  if (node.rate) j["rate"] = *node.rate;
  j["children"] = nlohmann::json::array();
  for (const auto& child : node.children) j["children"].push_back(node_to_json(child));
  return j;
}

}  // namespace

std::string tree_to_json(const CauseTree& tree, int indent) {
  nlohmann::json j;
  j["root"] = tree.root_word;
  j["direction"] = to_string(tree.direction);
  j["num_docs"] = tree.num_docs;
  j["tree"] = node_to_json(tree.root);
  return j.dump(indent);
}

}  // namespace causal
