#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "causal/stats.hpp"
#include "oracles.hpp"

using namespace causal;

namespace {

Document doc(std::vector<std::string> tokens) {
  Document d;
  d.id = "d";
  d.tokens_cased = tokens;
  d.tokens_lower = std::move(tokens);
  return d;
}

FrequencyTable table_of(std::initializer_list<std::pair<const char*, std::int64_t>> counts, std::int64_t docs) {
  FrequencyTable t;
  t.num_docs = docs;
  for (auto& [w, n] : counts) {
    t.counts[w] = n;
    t.doc_freq[w] = std::min<std::int64_t>(n, docs);
    t.total += n;
  }
  return t;
}

}  // namespace

TEST_CASE("hand-counted frequencies") {
  auto t = count({doc({"a", "b"}), doc({"a"})}, ItemKind::Unigram);
  CHECK(t.f("a") == 2);
  CHECK(t.f("b") == 1);
  CHECK(t.df("a") == 2);
  CHECK(t.df("b") == 1);
  CHECK(t.num_docs == 2);
  CHECK(t.total == 3);
  CHECK(t.p("a") == doctest::Approx(2.0 / 3.0));

  auto empty = count({}, ItemKind::Unigram);
  CHECK(empty.num_docs == 0);
  CHECK(empty.counts.empty());
}

TEST_CASE("tag counts") {
  Document d = doc({"new", "york", "times", "rocks"});
  d.pos_tags = std::vector<std::string>{"NNP", "NNP", "NNP", "VBZ"};
  d.ne_tags = std::vector<std::string>{"Organization", "Organization", "Organization", "O"};
  auto pos = count({d}, ItemKind::Pos);
  CHECK(pos.f("NNP") == 3);
  CHECK(pos.df("NNP") == 1);
  auto ne = count({d}, ItemKind::Ne);
  CHECK(ne.f("Organization") == 1);
  CHECK(ne.total == 1);

  Document bare = doc({"x"});
  CHECK_THROWS_WITH_AS(count({bare}, ItemKind::Pos), doctest::Contains("pos"), DataError);
  CHECK_THROWS_WITH_AS(count({bare}, ItemKind::Ne), doctest::Contains("ne"), DataError);
}

TEST_CASE("sharded counts merge to the serial table") {
  std::mt19937_64 g(3);
  Corpus corpus;
  for (int i = 0; i < 300; ++i) {
    std::vector<std::string> t;
    for (int k = 0; k < 1 + static_cast<int>(g() % 9); ++k) t.push_back("w" + std::to_string(g() % 40));
    corpus.push_back(doc(t));
  }
  auto serial = count(corpus, ItemKind::Unigram, 1);
  auto sharded = count(corpus, ItemKind::Unigram, 7);
  CHECK(serial.counts == sharded.counts);
  CHECK(serial.doc_freq == sharded.doc_freq);
  CHECK(serial.total == sharded.total);
  CHECK(serial.num_docs == sharded.num_docs);
}

TEST_CASE("tf-idf values") {
  CHECK(tfidf(100, 10, 1000) == doctest::Approx(std::log(100.0) * std::log(100.0)));
  CHECK(tfidf(100, 10, 1000) == doctest::Approx(21.2076).epsilon(1e-5));
  CHECK(tfidf(7, 5, 5) == 0.0);
  CHECK(tfidf(100, 10, 1000, 10.0) == doctest::Approx(4.0));
  CHECK_THROWS_AS(tfidf(1, 2, 1), std::invalid_argument);
}

TEST_CASE("nearest-rank percentile") {
  std::vector<double> v{5, 1, 4, 2, 3, 10, 9, 8, 7, 6};
  CHECK(nearest_rank_percentile(v, 90) == 9);
  CHECK(nearest_rank_percentile(v, 91) == 10);
  CHECK(nearest_rank_percentile(v, 0) == 1);
  CHECK(nearest_rank_percentile({4.0}, 90) == 4);
}

TEST_CASE("ten-item table keeps items above the single cutoff") {
  FrequencyTable t;
  t.num_docs = 100;
  for (int i = 1; i <= 10; ++i) {
    const std::string w = "w" + std::to_string(i);
    t.counts[w] = 10 * i;
    t.doc_freq[w] = 11 - i;
    t.total += 10 * i;
  }
  TfIdfOptions options;
  options.top_k = 10;
  auto selected = tfidf_filter(t, options);
  std::vector<oracle::Item> items;
  for (auto& [w, f] : t.counts) items.push_back({w, f, t.df(w)});
  CHECK(selected == oracle::tfidf_select(items, 100, 90, 10));
  CHECK(selected.size() == 1);
}

TEST_CASE("tf-idf table guards") {
  FrequencyTable t;
  CHECK_THROWS_AS(tfidf_table(t), DataError);
  t = table_of({{"a", 3}}, 2);
  TfIdfOptions bad;
  bad.percentile = 100;
  CHECK_THROWS_AS(tfidf_table(t, bad), std::invalid_argument);
  // An item present in every document scores zero and is never selected.
  auto records = tfidf_table(t);
  CHECK(records[0].tfidf == 0.0);
  CHECK_FALSE(records[0].selected);
}

TEST_CASE("odds ratio hand example") {
  auto r = odds_ratio("x", 2, 8, 1, 9);
  CHECK(r.odds_ratio == doctest::Approx(2.25).epsilon(1e-14));
  const double se = std::sqrt(1.0 / 2 + 1.0 / 8 + 1.0 + 1.0 / 9);
  const double z = 1.959963984540054;
  CHECK(r.ci_low == doctest::Approx(std::exp(std::log(2.25) - z * se)).epsilon(1e-12));
  CHECK(r.ci_high == doctest::Approx(std::exp(std::log(2.25) + z * se)).epsilon(1e-12));
  CHECK_FALSE(r.significant);
  CHECK_FALSE(r.degenerate);
  auto w = oracle::wald(2, 10, 1, 10, z);
  CHECK(oracle::relative_error(r.odds_ratio, w.odds_ratio) <= 1e-12);
  CHECK(normal_critical_value(0.05) == doctest::Approx(z).epsilon(1e-15));
}

TEST_CASE("identical tables give unit odds") {
  auto t = table_of({{"a", 5}, {"b", 9}, {"c", 2}}, 4);
  for (const auto& r : odds_ratios(t, t, t.items())) {
    CHECK(r.odds_ratio == 1.0);
    CHECK(r.log_or == 0.0);
    CHECK_FALSE(r.significant);
  }
}

TEST_CASE("zero cells are flagged") {
  auto r = odds_ratio("x", 0, 10, 3, 7);
  CHECK(r.degenerate);
  CHECK(std::isnan(r.ci_low));
  CHECK(std::isnan(r.ci_high));
  CHECK_FALSE(r.significant);
  CHECK(r.odds_ratio == 0.0);

  OddsRatioOptions haldane;
  haldane.haldane_correction = true;
  auto h = odds_ratio("x", 0, 10, 3, 7, haldane);
  CHECK(h.degenerate);
  CHECK(h.odds_ratio == doctest::Approx((0.5 * 7.5) / (10.5 * 3.5)));
  CHECK(std::isfinite(h.ci_low));
}

TEST_CASE("swapping corpora negates log odds exactly") {
  std::mt19937_64 g(17);
  for (int i = 0; i < 500; ++i) {
    const std::int64_t a = 1 + g() % 50, b = 1 + g() % 500, c = 1 + g() % 50, d = 1 + g() % 500;
    auto fwd = odds_ratio("x", a, b, c, d);
    auto rev = odds_ratio("x", c, d, a, b);
    CHECK(rev.log_or == -fwd.log_or);
    CHECK(std::log(rev.ci_high) == doctest::Approx(-std::log(fwd.ci_low)).epsilon(1e-15));
    CHECK(fwd.odds_ratio * rev.odds_ratio == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rev.significant == fwd.significant);
  }
}

TEST_CASE("candidate pooling") {
  auto cause = table_of({{"a", 50}, {"b", 1}, {"c", 1}, {"d", 1}, {"e", 1}}, 60);
  auto control = table_of({{"a", 1}, {"b", 40}, {"c", 1}, {"d", 1}, {"e", 1}}, 60);
  TfIdfOptions options;
  options.percentile = 50;
  auto uni = unigram_candidates(cause, control, options, CandidatePooling::Union);
  auto inter = unigram_candidates(cause, control, options, CandidatePooling::Intersection);
  CHECK(uni == std::vector<std::string>{"a", "b"});
  CHECK(inter.empty());
  CHECK(shared_vocabulary(cause, control).size() == 5);
}

TEST_CASE("pearson correlation") {
  CHECK(pearson({1, 2, 3}, {2, 4, 6}) == 1.0);
  CHECK(pearson({1, 2, 3}, {-1, -2, -3}) == -1.0);
  CHECK_THROWS_AS(pearson({1, 1, 1}, {1, 2, 3}), DataError);
  std::mt19937_64 g(8);
  std::normal_distribution<double> n;
  for (int i = 0; i < 50; ++i) {
    std::vector<double> x, y;
    for (int k = 0; k < 20; ++k) {
      x.push_back(n(g));
      y.push_back(n(g));
    }
    const double r = pearson(x, y);
    CHECK(r >= -1.0);
    CHECK(r <= 1.0);
    CHECK(pearson(x, x) == 1.0);
  }
}

TEST_CASE("variant comparison") {
  VariantOdds a{true, true, {}};
  VariantOdds b{false, true, {}};
  for (int i = 0; i < 6; ++i) {
    a.records.push_back(odds_ratio("T" + std::to_string(i), 1 + i, 20, 3, 20 + i));
  }
  b.records = a.records;
  for (auto& r : b.records) r.log_or = -r.log_or;
  b.records.push_back(odds_ratio("Z", 0, 5, 1, 5));
  auto cmp = compare_variants(a, b);
  CHECK(cmp.variant_a == "punct+cased");
  CHECK(cmp.variant_b == "nopunct+cased");
  CHECK(cmp.pearson_rho == -1.0);
  CHECK(cmp.dropped == std::vector<std::string>{"Z"});
  CHECK(compare_variants(a, a).pearson_rho == 1.0);

  a.records.resize(2);
  CHECK_THROWS_AS(compare_variants(a, b), DataError);
}
