// causal-corpus: command-line front end for the causal/control corpus study.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "causal/pipeline.hpp"

namespace {

void add_options(CLI::App& app, causal::PipelineConfig& c) {
  app.add_option("--input", c.input, "raw post NDJSON file(s): id, text, timestamp, lang")->group("Inputs");
  app.add_option("--documents", c.documents, "preprocessed document NDJSON for select")->group("Inputs");
  app.add_option("--stopword-dir,--stopword_dir", c.stopword_dir, "directory of per-language stopword files")
      ->group("Inputs");
  app.add_option("--lexicon", c.lexicon, "sentiment lexicon TSV (word, score)")->group("Inputs");
  app.add_option("--annotations", c.annotations, "annotation TSV file(s): id, kind, tags")->group("Inputs");
  app.add_option("--sentiment-labels,--sentiment_labels", c.sentiment_labels, "document sentiment labels TSV")
      ->group("Inputs");
  app.add_option("--treebank", c.treebank, "POS training data, one sentence per line as word/TAG")->group("Inputs");
  app.add_option("--tagger-model,--tagger_model", c.tagger_model, "trained tagger model JSON")->group("Inputs");
  app.add_option("--output-dir,--output_dir,-o", c.output_dir, "directory for all artifacts")
      ->capture_default_str()
      ->group("Inputs");

  app.add_option("--keep-punctuation,--keep_punctuation", c.keep_punctuation)->capture_default_str()->group("Preprocessing");
  app.add_option("--keep-casing,--keep_casing", c.keep_casing)->capture_default_str()->group("Preprocessing");

  app.add_option("--cause-words,--cause_words", c.cause_words)->capture_default_str()->group("Selection");
  app.add_option("--bidirectional-stems,--bidirectional_stems", c.bidirectional_stems)
      ->capture_default_str()
      ->group("Selection");
  app.add_option("--bin-width-seconds,--bin_width_seconds", c.bin_width_seconds)->capture_default_str()->group("Selection");

  app.add_option("--tfidf-percentile,--tfidf_percentile", c.tfidf_percentile)->capture_default_str()->group("Statistics");
  app.add_option("--tfidf-top-k,--tfidf_top_k", c.tfidf_top_k)->capture_default_str()->group("Statistics");
  app.add_option("--candidate-pooling,--candidate_pooling", c.candidate_pooling, "union or intersection")
      ->capture_default_str()
      ->group("Statistics");
  app.add_option("--or-alpha,--or_alpha", c.or_alpha)->capture_default_str()->group("Statistics");
  app.add_option("--haldane-correction,--haldane_correction", c.haldane_correction)
      ->capture_default_str()
      ->group("Statistics");

  app.add_option("--tree-depth,--tree_depth", c.tree_depth)->capture_default_str()->group("Cause-trees");
  app.add_option("--tree-branch,--tree_branch", c.tree_branch)->capture_default_str()->group("Cause-trees");
  app.add_option("--ngram-count,--ngram_count", c.ngram_count, "occurrences or documents")
      ->capture_default_str()
      ->group("Cause-trees");

  app.add_option("--histogram-bins,--histogram_bins", c.histogram_bins)->capture_default_str()->group("Sentiment");
  app.add_option("--sentiment-weighting,--sentiment_weighting", c.sentiment_weighting, "token or type")
      ->capture_default_str()
      ->group("Sentiment");

  app.add_option("--tagger-epochs,--tagger_epochs", c.tagger_epochs)->capture_default_str()->group("Tagger");

  app.add_option("--lda-topics,--lda_topics", c.lda_topics)->capture_default_str()->group("Topics");
  app.add_option("--lda-alpha-sum,--lda_alpha_sum", c.lda_alpha_sum)->capture_default_str()->group("Topics");
  app.add_option("--lda-beta,--lda_beta", c.lda_beta)->capture_default_str()->group("Topics");
  app.add_option("--lda-iterations,--lda_iterations", c.lda_iterations)->capture_default_str()->group("Topics");
  app.add_option("--lda-vocab-min-count,--lda_vocab_min_count", c.lda_vocab_min_count)
      ->capture_default_str()
      ->group("Topics");
  app.add_option("--lda-top-words,--lda_top_words", c.lda_top_words)->capture_default_str()->group("Topics");
  app.add_option("--lda-stopwords,--lda_stopwords", c.lda_stopwords, "words to drop before topic modeling")
      ->group("Topics");

  app.add_option("--rng-seed,--rng_seed,--seed", c.rng_seed)->capture_default_str();
  app.add_option("--threads", c.threads, "cap on shard parallelism")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extracts causal and matched control corpora from a post stream and compares them."};
  app.name(causal::kToolName);
  app.set_version_flag("--version", causal::kToolVersion);
  app.set_config("--config", "", "key = value configuration file (keys are option names)");
  app.fallthrough();
  app.require_subcommand(1);

  causal::PipelineConfig config;
  add_options(app, config);

  const std::map<std::string, std::string> descriptions{
      {"ingest", "load, preprocess and language-gate raw posts"},
      {"select", "split documents into causal and matched control corpora"},
      {"tag-train", "train the averaged-perceptron POS tagger"},
      {"tag", "POS-tag both corpora"},
      {"annotate", "attach imported POS/NE annotations"},
      {"freq", "unigram, POS and NE frequency tables"},
      {"tfidf", "tf-idf tables and selection"},
      {"odds", "odds ratios with Wald intervals"},
      {"causetree", "n-gram cause-trees for each cause-word"},
      {"sentiment", "lexicon sentiment means, histograms and t-test"},
      {"doc-classes", "document-level sentiment class proportions"},
      {"lda", "topic model of the causal corpus"},
      {"variants", "POS odds-ratio correlation across preprocessing variants"},
      {"report-all", "run the full pipeline"}};
  std::string chosen;
  for (const auto& name : causal::subcommand_names()) {
    app.add_subcommand(name, descriptions.at(name))->callback([&chosen, name] { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 1;
  }
  return causal::run_and_report(chosen, config);
}
