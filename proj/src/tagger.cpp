#include "causal/tagger.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "causal/text.hpp"

namespace causal {

AveragedPerceptron::AveragedPerceptron(std::vector<std::string> classes) : classes_(std::move(classes)) {
  std::sort(classes_.begin(), classes_.end());
  classes_.erase(std::unique(classes_.begin(), classes_.end()), classes_.end());
  if (classes_.empty()) throw std::invalid_argument("perceptron needs at least one class");
}

std::size_t AveragedPerceptron::predict(std::span<const std::string> features) const {
  std::vector<double> scores(classes_.size(), 0.0);
  for (const auto& f : features) {
    auto it = weights_.find(f);
    if (it == weights_.end()) continue;
    for (std::size_t c = 0; c < scores.size(); ++c) scores[c] += it->second[c];
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c) {
    if (scores[c] > scores[best]) best = c;
  }
  return best;
}

void AveragedPerceptron::update(std::size_t truth, std::size_t guess,
                                std::span<const std::string> features) {
  // The step counter advances before the change so that a weight set during
  // step s contributes its new value for step s itself.
  ++steps_;
  if (truth == guess) return;
  const std::size_t n = classes_.size();
  auto bump = [&](const std::string& f, std::size_t cls, double delta) {
    auto& w = weights_.try_emplace(f, n, 0.0).first->second;
    auto& acc = accumulators_.try_emplace(f, n).first->second;
    acc[cls].total += static_cast<double>(steps_ - 1 - acc[cls].stamp) * w[cls];
    acc[cls].stamp = steps_ - 1;
    w[cls] += delta;
  };
  for (const auto& f : features) {
    bump(f, truth, 1.0);
    bump(f, guess, -1.0);
  }
}

void AveragedPerceptron::average() {
  if (steps_ == 0) return;
  for (auto& [f, w] : weights_) {
    auto& acc = accumulators_.try_emplace(f, classes_.size()).first->second;
    for (std::size_t c = 0; c < w.size(); ++c) {
      double total = acc[c].total + static_cast<double>(steps_ - acc[c].stamp) * w[c];
      w[c] = total / static_cast<double>(steps_);
    }
  }
  std::erase_if(weights_, [](const auto& kv) {
    return std::all_of(kv.second.begin(), kv.second.end(), [](double v) { return v == 0.0; });
  });
  accumulators_.clear();
}

double AveragedPerceptron::weight(const std::string& feature, std::size_t cls) const {
  auto it = weights_.find(feature);
  return it == weights_.end() ? 0.0 : it->second.at(cls);
}

void AveragedPerceptron::set_weights(std::unordered_map<std::string, std::vector<double>> weights) {
  for (const auto& [f, w] : weights) {
    if (w.size() != classes_.size()) throw DataError("weight vector for '" + f + "' has wrong arity");
  }
  weights_ = std::move(weights);
  accumulators_.clear();
}

// ---------------------------------------------------------------------------

namespace {

const std::string kStart = "-START-";
const std::string kStart2 = "-START2-";
const std::string kEnd = "-END-";

std::size_t class_index(const std::vector<std::string>& classes, const std::string& tag) {
  auto it = std::lower_bound(classes.begin(), classes.end(), tag);
  if (it == classes.end() || *it != tag) throw std::out_of_range("unknown tag " + tag);
  return static_cast<std::size_t>(it - classes.begin());
}

}  // namespace

std::vector<std::string> tagger_features(const std::vector<std::string>& tokens, std::size_t i,
                                         const std::string& prev_tag, const std::string& prev2_tag) {
  const std::string& word = tokens[i];
  const std::string lower = text::to_lower(word);
  std::vector<std::string> f;
  f.reserve(12);
  f.push_back("bias");
  f.push_back("w=" + lower);
  f.push_back("s1=" + text::suffix(lower, 1));
  f.push_back("s2=" + text::suffix(lower, 2));
  f.push_back("s3=" + text::suffix(lower, 3));
  f.push_back("p1=" + text::prefix(lower, 1));
  f.push_back("t-1=" + prev_tag);
  f.push_back("t-2,t-1=" + prev2_tag + "|" + prev_tag);
  f.push_back("w-1=" + (i == 0 ? kStart : text::to_lower(tokens[i - 1])));
  f.push_back("w+1=" + (i + 1 < tokens.size() ? text::to_lower(tokens[i + 1]) : kEnd));
  if (text::has_digit(word)) f.push_back("digit");
  if (text::has_upper(word)) f.push_back("upper");
  return f;
}

std::vector<std::string> PerceptronModel::tag(const std::vector<std::string>& tokens) const {
  std::vector<std::string> tags;
  tags.reserve(tokens.size());
  std::string prev = kStart, prev2 = kStart2;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    std::string guess;
    if (auto it = single_tag_words_.find(tokens[i]); it != single_tag_words_.end()) {
      guess = it->second;
    } else {
      auto feats = tagger_features(tokens, i, prev, prev2);
      guess = perceptron_.classes()[perceptron_.predict(feats)];
    }
    prev2 = prev;
    prev = guess;
    tags.push_back(std::move(guess));
  }
  return tags;
}

double PerceptronModel::weight(const std::string& feature, const std::string& tag) const {
  return perceptron_.weight(feature, class_index(perceptron_.classes(), tag));
}

std::string PerceptronModel::to_json() const {
  nlohmann::json j;
  j["format"] = "causal-averaged-perceptron";
  j["feature_template_version"] = kFeatureTemplateVersion;
  j["tags"] = perceptron_.classes();
  j["single_tag_words"] = single_tag_words_;
  j["epochs_trained"] = epochs_trained_;
  nlohmann::json weights = nlohmann::json::object();
  for (const auto& [feature, w] : perceptron_.weights()) {
    nlohmann::json row = nlohmann::json::object();
    for (std::size_t c = 0; c < w.size(); ++c) {
      if (w[c] != 0.0) row[perceptron_.classes()[c]] = w[c];
    }
    weights[feature] = std::move(row);
  }
  j["weights"] = std::move(weights);
  return j.dump();
}

PerceptronModel PerceptronModel::from_json(const std::string& text) {
  try {
    auto j = nlohmann::json::parse(text);
    if (j.at("format") != "causal-averaged-perceptron") throw DataError("not a tagger model");
    if (j.at("feature_template_version").get<int>() != kFeatureTemplateVersion) {
      throw DataError("tagger model uses feature template version " +
                      std::to_string(j.at("feature_template_version").get<int>()) + ", expected " +
                      std::to_string(kFeatureTemplateVersion));
    }
    PerceptronModel model;
    model.perceptron_ = AveragedPerceptron(j.at("tags").get<std::vector<std::string>>());
    model.single_tag_words_ = j.at("single_tag_words").get<std::map<std::string, std::string>>();
    model.epochs_trained_ = j.at("epochs_trained").get<int>();
    const auto& classes = model.perceptron_.classes();
    std::unordered_map<std::string, std::vector<double>> weights;
    for (const auto& [feature, row] : j.at("weights").items()) {
      std::vector<double> w(classes.size(), 0.0);
      for (const auto& [tag, value] : row.items()) {
        auto it = std::lower_bound(classes.begin(), classes.end(), tag);
        if (it == classes.end() || *it != tag) throw DataError("weight for unknown tag " + tag);
        w[static_cast<std::size_t>(it - classes.begin())] = value.get<double>();
      }
      weights.emplace(feature, std::move(w));
    }
    model.perceptron_.set_weights(std::move(weights));
    for (const auto& [word, tag] : model.single_tag_words_) {
      if (!std::binary_search(classes.begin(), classes.end(), tag)) {
        throw DataError("single-tag word '" + word + "' maps to unknown tag " + tag);
      }
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed tagger model: ") + e.what());
  }
}

void PerceptronModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << to_json() << '\n';
}

PerceptronModel PerceptronModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read tagger model " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

PerceptronModel train(const std::vector<TaggedSentence>& corpus, const TrainOptions& options) {
  if (options.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (corpus.empty()) throw DataError("cannot train a tagger on an empty corpus");

  std::set<std::string> tags;
  std::map<std::string, std::map<std::string, std::size_t>> word_tag_counts;
  for (std::size_t s = 0; s < corpus.size(); ++s) {
    const auto& sentence = corpus[s];
    if (sentence.tokens.size() != sentence.tags.size()) {
      throw DataError("training sentence " + std::to_string(s) + " has " +
                      std::to_string(sentence.tokens.size()) + " tokens but " +
                      std::to_string(sentence.tags.size()) + " tags");
    }
    for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
      tags.insert(sentence.tags[i]);
      ++word_tag_counts[sentence.tokens[i]][sentence.tags[i]];
    }
  }
  if (tags.empty()) throw DataError("training corpus has no tagged tokens");

  PerceptronModel model;
  model.perceptron_ = AveragedPerceptron(std::vector<std::string>(tags.begin(), tags.end()));
  for (const auto& [word, counts] : word_tag_counts) {
    if (counts.size() != 1) continue;
    if (counts.begin()->second >= options.single_tag_min_count) {
      model.single_tag_words_[word] = counts.begin()->first;
    }
  }

  const auto& classes = model.perceptron_.classes();
  std::vector<std::size_t> order(corpus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng = make_rng(options.seed, {0x7461676765ULL});

  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    shuffle(order, rng);
    for (std::size_t s : order) {
      const auto& sentence = corpus[s];
      std::string prev = kStart, prev2 = kStart2;
      for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
        std::string guess;
        if (auto it = model.single_tag_words_.find(sentence.tokens[i]);
            it != model.single_tag_words_.end()) {
          guess = it->second;
        } else {
          auto feats = tagger_features(sentence.tokens, i, prev, prev2);
          std::size_t g = model.perceptron_.predict(feats);
          model.perceptron_.update(class_index(classes, sentence.tags[i]), g, feats);
          guess = classes[g];
        }
        prev2 = prev;
        prev = guess;
      }
    }
  }
  model.perceptron_.average();
  model.epochs_trained_ = options.epochs;
  return model;
}

Document tag(const PerceptronModel& model, Document doc) {
  doc.pos_tags = model.tag(doc.tokens_cased);
  return doc;
}

double accuracy(const PerceptronModel& model, const std::vector<TaggedSentence>& corpus) {
  std::size_t total = 0, correct = 0;
  for (const auto& sentence : corpus) {
    auto predicted = model.tag(sentence.tokens);
    for (std::size_t i = 0; i < predicted.size(); ++i) {
      ++total;
      if (predicted[i] == sentence.tags[i]) ++correct;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(total);
}

std::vector<TaggedSentence> read_treebank(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read treebank " + path);
  std::vector<TaggedSentence> corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto items = text::split_whitespace(line);
    if (items.empty()) continue;
    TaggedSentence sentence;
    for (const auto& item : items) {
      auto slash = item.rfind('/');
      if (slash == std::string::npos || slash == 0 || slash + 1 == item.size()) {
        throw DataError(path + ":" + std::to_string(line_no) + ": token '" + item +
                        "' is not word/TAG");
      }
      sentence.tokens.push_back(item.substr(0, slash));
      sentence.tags.push_back(item.substr(slash + 1));
    }
    corpus.push_back(std::move(sentence));
  }
  return corpus;
}

// ---------------------------------------------------------------------------

const char* to_string(AnnotationKind kind) { return kind == AnnotationKind::Pos ? "pos" : "ne"; }

namespace {

std::optional<std::string> canonical_ne(const std::string& label) {
  const std::string lower = text::to_lower(label);
  for (const auto& canon : ne_labels()) {
    if (text::to_lower(canon) == lower) return canon;
  }
  if (lower == "org") return "Organization";
  if (lower == "loc") return "Location";
  if (lower == "per") return "Person";
  return std::nullopt;
}

}  // namespace

std::vector<AnnotationEntry> read_annotations(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read annotation file " + path);
  std::vector<AnnotationEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto tab1 = line.find('\t');
    auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos) {
      throw DataError(path + ":" + std::to_string(line_no) + ": expected id<TAB>kind<TAB>tags");
    }
    AnnotationEntry entry;
    entry.id = line.substr(0, tab1);
    const std::string kind = text::to_lower(line.substr(tab1 + 1, tab2 - tab1 - 1));
    if (kind == "pos") {
      entry.kind = AnnotationKind::Pos;
    } else if (kind == "ne") {
      entry.kind = AnnotationKind::Ne;
    } else {
      throw DataError(path + ":" + std::to_string(line_no) + ": unknown annotation kind '" + kind + "'");
    }
    entry.tags = text::split_whitespace(line.substr(tab2 + 1));
    entries.push_back(std::move(entry));
  }
  return entries;
}

double ImportReport::pos_coverage() const {
  return documents == 0 ? 0.0 : static_cast<double>(attached_pos) / static_cast<double>(documents);
}

double ImportReport::ne_coverage() const {
  return documents == 0 ? 0.0 : static_cast<double>(attached_ne) / static_cast<double>(documents);
}

ImportReport import_annotations(Corpus& corpus, const std::vector<AnnotationEntry>& entries) {
  ImportReport report;
  report.documents = corpus.size();
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < corpus.size(); ++i) index.emplace(corpus[i].id, i);

  for (const auto& entry : entries) {
    auto it = index.find(entry.id);
    if (it == index.end()) {
      ++report.unknown_ids;
      continue;
    }
    Document& doc = corpus[it->second];
    if (entry.tags.size() != doc.size()) {
      report.errors.push_back(entry.id + ": " + to_string(entry.kind) + " annotation has " +
                              std::to_string(entry.tags.size()) + " tags for " +
                              std::to_string(doc.size()) + " tokens");
      continue;
    }
    if (entry.kind == AnnotationKind::Pos) {
      if (!doc.pos_tags) ++report.attached_pos;
      doc.pos_tags = entry.tags;
      continue;
    }
    std::vector<std::string> labels;
    labels.reserve(entry.tags.size());
    bool valid = true;
    for (const auto& t : entry.tags) {
      auto canon = canonical_ne(t);
      if (!canon) {
        report.errors.push_back(entry.id + ": invalid NE label '" + t + "'");
        valid = false;
        break;
      }
      labels.push_back(*canon);
    }
    if (!valid) continue;
    if (!doc.ne_tags) ++report.attached_ne;
    doc.ne_tags = std::move(labels);
  }
  return report;
}

std::vector<EntityMention> entity_mentions(const std::vector<std::string>& ne_tags) {
  std::vector<EntityMention> mentions;
  std::size_t i = 0;
  while (i < ne_tags.size()) {
    if (ne_tags[i] == "O") {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < ne_tags.size() && ne_tags[j] == ne_tags[i]) ++j;
    mentions.push_back({ne_tags[i], i, j});
    i = j;
  }
  return mentions;
}

}  // namespace causal
