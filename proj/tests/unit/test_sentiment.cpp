#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "causal/sentiment.hpp"
#include "oracles.hpp"

using namespace causal;

namespace {

std::string temp_path(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "causal_test_sentiment";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

Document doc(std::string id, std::vector<std::string> tokens, std::vector<std::string> pos = {}) {
  Document d;
  d.id = std::move(id);
  d.tokens_cased = tokens;
  d.tokens_lower = std::move(tokens);
  if (!pos.empty()) d.pos_tags = std::move(pos);
  return d;
}

FrequencyTable freq(std::initializer_list<std::pair<const char*, std::int64_t>> counts) {
  FrequencyTable t;
  t.num_docs = 10;
  for (auto& [w, n] : counts) {
    t.counts[w] = n;
    t.doc_freq[w] = 1;
    t.total += n;
  }
  return t;
}

}  // namespace

TEST_CASE("lexicon recentering") {
  SentimentLexicon lex({{"a", 7.0}, {"b", 4.0}, {"c", 7.0}});
  CHECK(lex.mean_raw() == 6.0);
  CHECK(lex.score("a") == 1.0);
  CHECK(lex.score("b") == -2.0);
  CHECK(lex.raw_score("b") == 4.0);
  CHECK(lex.min_score() == -2.0);
  CHECK(lex.max_score() == 1.0);
  CHECK_THROWS_AS(lex.score("zzz"), std::out_of_range);
  CHECK_THROWS_AS(SentimentLexicon(std::unordered_map<std::string, double>{}), DataError);

  std::mt19937_64 g(4);
  std::unordered_map<std::string, double> raw;
  for (int i = 0; i < 1000; ++i) raw["w" + std::to_string(i)] = 1.0 + static_cast<double>(g() % 8000) / 1000.0;
  SentimentLexicon big(raw);
  double sum = 0.0;
  for (auto& [w, s] : raw) sum += big.score(w);
  CHECK(std::fabs(sum / 1000.0) <= 1e-9);
}

TEST_CASE("lexicon file loading") {
  const auto path = temp_path("lex.tsv");
  std::ofstream(path) << "word\thappiness\n# comment\nLaughter\t8.5\n\nhate\t2.3\n";
  auto lex = SentimentLexicon::load(path);
  CHECK(lex.size() == 2);
  CHECK(lex.contains("laughter"));
  CHECK(lex.mean_raw() == doctest::Approx(5.4));
  std::ofstream(temp_path("bad.tsv")) << "a\t1\nb\tlots\n";
  CHECK_THROWS_AS(SentimentLexicon::load(temp_path("bad.tsv")), DataError);
}

TEST_CASE("corpus mean score by hand") {
  SentimentLexicon lex({{"a", 1.0}, {"b", -2.0}, {"c", 1.0}});
  ScoredVocabulary vocab{{"a", "b"}, 1.0};
  CHECK(corpus_mean_score(freq({{"a", 3}, {"b", 1}}), vocab, lex) == 0.25);

  SentimentLexicon flat({{"a", 5.0}, {"b", 5.0}});
  CHECK(corpus_mean_score(freq({{"a", 3}, {"b", 1}}), vocab, flat) == 0.0);
  CHECK_THROWS_AS(corpus_mean_score(freq({{"a", 3}}), ScoredVocabulary{}, lex), DataError);
}

TEST_CASE("ubiquitous words drop out of the scored vocabulary") {
  Corpus corpus;
  for (int i = 0; i < 40; ++i) {
    std::vector<std::string> t{"caused", "w" + std::to_string(i % 9)};
    if (i % 3 == 0) t.push_back("happy");
    if (i % 5 == 0) t.push_back("sad");
    corpus.push_back(doc(std::to_string(i), t));
  }
  auto table = count(corpus, ItemKind::Unigram);
  SentimentLexicon lex({{"caused", 4.0}, {"happy", 8.0}, {"sad", 2.0}, {"w1", 5.0}});
  auto vocab = scored_vocabulary(table, lex, 5);
  CHECK_FALSE(vocab.words.contains("caused"));
  CHECK(vocab.words.contains("happy"));
  CHECK(vocab.coverage > 0.0);
  CHECK(vocab.coverage <= 1.0);
  for (const auto& w : vocab.words) CHECK(lex.contains(w));

  // Changing how often the cause-word appears leaves the mean alone while it stays in every document.
  const double before = corpus_mean_score(table, vocab, lex);
  for (auto& d : corpus) {
    d.tokens_lower.push_back("caused");
    d.tokens_cased.push_back("caused");
  }
  auto table2 = count(corpus, ItemKind::Unigram);
  auto vocab2 = scored_vocabulary(table2, lex, 5);
  CHECK(vocab2.words == vocab.words);
  CHECK(corpus_mean_score(table2, vocab2, lex) == before);
}

TEST_CASE("histograms") {
  SentimentLexicon lex({{"good", 8.0}, {"bad", 2.0}, {"meh", 5.0}});
  auto spec = HistogramSpec::for_lexicon(lex);
  CHECK(spec.bins == 50);
  CHECK(spec.bin_of(lex.min_score()) == 0);
  CHECK(spec.bin_of(lex.max_score()) == 49);
  CHECK(spec.bin_of(1e9) == 49);
  CHECK(spec.bin_of(-1e9) == 0);

  Corpus corpus{doc("1", {"good", "good", "bad", "x"}, {"JJ", "NN", "JJ", "NN"}),
                doc("2", {"good", "meh"}, {"JJ", "VB"})};
  ScoredVocabulary vocab{{"good", "bad", "meh"}, 1.0};
  auto h = score_distribution(corpus, vocab, lex, spec);
  CHECK(h.total_weight() == 5.0);
  CHECK(h.weights[spec.bin_of(lex.score("good"))] == 3.0);
  CHECK(h.excluded_tokens == 1);
  CHECK(h.filter_fraction == 1.0);

  auto adj = score_distribution(corpus, vocab, lex, spec, PosClass::Adjective);
  CHECK(adj.total_weight() == 3.0);
  CHECK(adj.filter_fraction == doctest::Approx(0.6));

  auto types = score_distribution(corpus, vocab, lex, spec, std::nullopt, Weighting::Type);
  CHECK(types.total_weight() == 3.0);

  auto sharded = score_distribution(corpus, vocab, lex, spec, std::nullopt, Weighting::Token, 2);
  CHECK(sharded.weights == h.weights);

  Corpus no_nouns{doc("1", {"good"}, {"JJ"})};
  auto none = score_distribution(no_nouns, vocab, lex, spec, PosClass::Noun);
  CHECK(none.total_weight() == 0.0);
  CHECK(none.filter_fraction == 0.0);

  SentimentLexicon one({{"w", 0.5}, {"z", 0.0}});
  Corpus single{doc("1", std::vector<std::string>(10, "w"))};
  auto s = score_distribution(single, ScoredVocabulary{{"w"}, 1.0}, one, HistogramSpec::for_lexicon(one));
  CHECK(std::count_if(s.weights.begin(), s.weights.end(), [](double w) { return w > 0; }) == 1);
  CHECK(s.total_weight() == 10.0);
}

TEST_CASE("pos classes") {
  CHECK(in_class("NNS", PosClass::Noun));
  CHECK(in_class("NNP", PosClass::Noun));
  CHECK(in_class("VBD", PosClass::Verb));
  CHECK(in_class("JJR", PosClass::Adjective));
  CHECK_FALSE(in_class("RB", PosClass::Adjective));
}

TEST_CASE("welch t-test") {
  auto same = welch_t_test(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2, 3});
  CHECK(same.t == 0.0);
  CHECK(same.p == 1.0);

  std::vector<double> zeros(100, 0.0), ones(100, 1.0);
  ones[0] = 0.0;
  auto r = welch_t_test(zeros, ones);
  CHECK(r.p < 0.01);
  auto o = oracle::welch(zeros, ones);
  CHECK(r.t == doctest::Approx(o.t).epsilon(1e-9));

  std::vector<double> a{1.0, 2.5, 3.1, 4.4}, b{0.3, 0.9, 1.2};
  auto ab = welch_t_test(a, b), ba = welch_t_test(b, a);
  CHECK(ab.t == -ba.t);
  CHECK(ab.p == ba.p);
  auto ob = oracle::welch(a, b);
  CHECK(ab.t == doctest::Approx(ob.t).epsilon(1e-12));
  CHECK(ab.df == doctest::Approx(ob.df).epsilon(1e-12));
  CHECK(ab.p == doctest::Approx(ob.p).epsilon(1e-9));

  CHECK_THROWS_AS(welch_t_test(std::vector<double>{1}, b), DataError);
  CHECK_THROWS_AS(welch_t_test(std::vector<double>{1, 1}, std::vector<double>{2, 2}), DataError);
}

TEST_CASE("weighted samples equal expanded samples") {
  SentimentLexicon lex({{"a", 1.0}, {"b", 3.0}, {"c", 8.0}});
  ScoredVocabulary vocab{{"a", "b", "c"}, 1.0};
  auto x = token_scores(freq({{"a", 3}, {"b", 2}}), vocab, lex);
  auto y = token_scores(freq({{"b", 1}, {"c", 4}}), vocab, lex);
  auto w = welch_t_test(x, y);
  std::vector<double> ex{-3, -3, -3, -1, -1}, ey{-1, 4, 4, 4, 4};
  auto e = welch_t_test(ex, ey);
  CHECK(w.t == doctest::Approx(e.t).epsilon(1e-14));
  CHECK(w.n_a == 5);
}

TEST_CASE("sentiment classes") {
  CHECK(parse_sentiment_class("very negative") == SentimentClass::VeryNegative);
  CHECK(parse_sentiment_class("Very_Positive") == SentimentClass::VeryPositive);
  CHECK(parse_sentiment_class("2") == SentimentClass::Neutral);
  CHECK_FALSE(parse_sentiment_class("ecstatic").has_value());

  Corpus corpus{doc("1", {"x"}), doc("2", {"x"}), doc("3", {"x"}), doc("4", {"x"}), doc("5", {"x"})};
  DocSentimentLabels labels{{"1", SentimentClass::Negative},
                            {"2", SentimentClass::Negative},
                            {"3", SentimentClass::Negative},
                            {"4", SentimentClass::Positive},
                            {"99", SentimentClass::Neutral}};
  auto dist = class_distribution(labels, corpus);
  CHECK(dist.proportions == std::array<double, 5>{0, 0.75, 0, 0.25, 0});
  CHECK(dist.labeled == 4);
  CHECK(dist.unlabeled == 1);
  CHECK(dist.unknown_ids == 1);

  DocSentimentLabels neutral{{"1", SentimentClass::Neutral}};
  CHECK(class_distribution(neutral, {doc("1", {"x"})}).proportions == std::array<double, 5>{0, 0, 1, 0, 0});
  CHECK_THROWS_AS(class_distribution({}, corpus), DataError);

  const auto path = temp_path("labels.tsv");
  std::ofstream(path) << "1\tnegative\n2\t4\n";
  auto read = read_sentiment_labels(path);
  CHECK(read.at("2") == SentimentClass::VeryPositive);
  std::ofstream(temp_path("bad_labels.tsv")) << "1\tglum\n";
  CHECK_THROWS_AS(read_sentiment_labels(temp_path("bad_labels.tsv")), DataError);
}
