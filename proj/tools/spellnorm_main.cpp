// spellnorm command-line tool: preprocessing, lexicon construction, model
// training, normalization, evaluation, significance testing, hybrid
// composition and learning curves.
//
// Exit codes: 0 success, 1 evaluation/domain failure, 2 usage/IO failure.

#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "spellnorm/spellnorm.hpp"

namespace {

using namespace spellnorm;

struct GlobalOptions {
  long long seed = 0;  // reserved: core algorithms are deterministic
  int threads = 1;
  bool quiet = false;
  std::string dump_config;
};

void info(const GlobalOptions& g, const std::string& msg) {
  if (!g.quiet) std::cerr << msg << "\n";
}

std::vector<std::string> sources_of(const Dataset& ds) {
  std::vector<std::string> out;
  out.reserve(ds.pairs.size());
  for (const auto& p : ds.pairs) out.push_back(p.source);
  return out;
}

std::vector<std::string> targets_of(const Dataset& ds) {
  std::vector<std::string> out;
  out.reserve(ds.pairs.size());
  for (const auto& p : ds.pairs) out.push_back(p.target);
  return out;
}

std::vector<std::string> normalize_all(const NormalizerModel& model,
                                       const std::vector<std::string>& tokens, int threads) {
  std::vector<std::string> out(tokens.size());
  if (threads <= 1) {
    for (std::size_t i = 0; i < tokens.size(); ++i) out[i] = normalize(model, tokens[i]).form;
    return out;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tokens.size()) return;
      out[i] = normalize(model, tokens[i]).form;
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return out;
}

std::set<std::string> vocabulary_of(const Dataset& ds) {
  std::set<std::string> vocab;
  for (const auto& p : ds.pairs) vocab.insert(p.source);
  return vocab;
}

std::vector<std::string> load_predictions(const std::string& path) {
  std::vector<std::string> preds;
  for (const std::string& line : io::split_lines(io::read_file(path))) {
    if (!uni::is_valid_utf8(line)) throw ParseError(path + ": invalid UTF-8");
    const std::size_t tab = line.find('\t');
    preds.push_back(canonicalize_prediction(
        tab == std::string::npos ? line : line.substr(0, tab)));
  }
  return preds;
}

void print_report_summary(const EvalReport& r) {
  std::printf("system            %s\n", r.system.empty() ? "-" : r.system.c_str());
  std::printf("tokens            %zu\n", r.n_total);
  std::printf("word accuracy     %.4f\n", r.word_accuracy);
  std::printf("identity baseline %.4f\n", r.identity_baseline);
  std::printf("maximum accuracy  %.4f\n", r.maximum_accuracy);
  std::printf("cer               %.4f\n", r.cer);
  if (r.cer_incorrect)
    std::printf("cer (incorrect)   %.4f\n", *r.cer_incorrect);
  else
    std::printf("cer (incorrect)   - (no incorrect predictions)\n");
  if (r.stem_accuracy_incorrect)
    std::printf("stem accuracy     %.4f\n", *r.stem_accuracy_incorrect);
  else if (!r.stem_absence_reason.empty() && r.stem_absence_reason != "not-requested")
    std::printf("stem accuracy     - (%s)\n", r.stem_absence_reason.c_str());
  if (r.has_seen_unseen) {
    std::printf("seen              %.4f (%zu tokens)\n", r.seen.accuracy(), r.seen.n);
    std::printf("unseen            %.4f (%zu tokens)\n", r.unseen.accuracy(), r.unseen.n);
  }
}

void print_mcnemar(const Contingency& c, const McNemarResult& m) {
  std::printf("contingency  both-wrong=%llu  B-only=%llu  A-only=%llu  both-right=%llu\n",
              static_cast<unsigned long long>(c.n00), static_cast<unsigned long long>(c.n01),
              static_cast<unsigned long long>(c.n10), static_cast<unsigned long long>(c.n11));
  std::printf("mcnemar statistic %.6f%s\n", m.statistic,
              m.used_exact ? " (exact binomial verdict)" : "");
  if (m.used_exact) std::printf("exact p-value     %.6f\n", m.p_value);
  std::printf("verdict           %s at p < 0.05\n",
              m.significant ? "significant" : "not significant");
}

int run(int argc, char** argv) {
  CLI::App app{"token-level historical spelling normalization toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from an INI file");

  GlobalOptions global;
  app.add_option("--seed", global.seed, "random seed (reserved; pipelines are deterministic)")
      ->default_val(0);
  app.add_option("--threads", global.threads, "worker threads for per-token operations")
      ->default_val(1)
      ->check(CLI::PositiveNumber);
  app.add_flag("--quiet", global.quiet, "suppress diagnostics");
  app.add_option("--dump-config", global.dump_config,
                 "write the effective configuration to a file and continue");

  // --- preprocess ---
  auto* cmd_pre = app.add_subcommand("preprocess", "apply the preprocessing pipeline to a "
                                                   "two-column dataset");
  std::string pre_in, pre_out;
  cmd_pre->add_option("input", pre_in, "raw source<TAB>target file")->required();
  cmd_pre->add_option("output", pre_out, "destination for the preprocessed pairs")->required();

  // --- lexicon ---
  auto* cmd_lex = app.add_subcommand("lexicon", "build a contemporary lexicon from running "
                                                "text and wordlists");
  std::vector<std::string> lex_corpora, lex_wordlists;
  std::string lex_out;
  cmd_lex->add_option("--corpus", lex_corpora, "running-text corpus file(s)");
  cmd_lex->add_option("--wordlist", lex_wordlists, "one-type-per-line wordlist file(s)");
  cmd_lex->add_option("output", lex_out, "destination lexicon file")->required();

  // --- train ---
  auto* cmd_train = app.add_subcommand("train", "train a normalizer backend");
  std::string train_backend, train_path, train_lexicon, train_out, train_extra;
  TrainConfig train_config;
  std::string chain_components = "lookup,rules,distance";
  cmd_train->add_option("--backend", train_backend, "lookup|rules|distance|channel|chain")
      ->required();
  cmd_train->add_option("train", train_path, "preprocessed training pairs")->required();
  cmd_train->add_option("--lexicon", train_lexicon,
                        "lexicon file (required for distance and chain)");
  cmd_train->add_option("--out", train_out, "model output path")->required();
  cmd_train->add_option("--threshold", train_config.distance_threshold,
                        "distance threshold per source character")
      ->default_val(kDefaultDistanceThreshold);
  cmd_train->add_option("--iterations", train_config.weight_iterations,
                        "weight re-alignment rounds")
      ->default_val(kDefaultWeightIterations);
  cmd_train->add_option("--lm-order", train_config.lm_order, "character LM order")
      ->default_val(kDefaultLmOrder);
  cmd_train->add_option("--lm-weight", train_config.lm_weight, "LM weight in the decoder")
      ->default_val(kDefaultLmWeight);
  cmd_train->add_option("--beam-width", train_config.beam_width, "decoder beam width")
      ->default_val(kDefaultBeamWidth);
  cmd_train->add_option("--max-unit", train_config.max_unit,
                        "max source characters per substitution unit")
      ->default_val(kDefaultMaxUnit);
  cmd_train->add_option("--extra-lm-corpus", train_extra,
                        "additional monolingual text for the channel LM (+LM setup)");
  cmd_train->add_option("--chain-components", chain_components,
                        "comma-separated subset of lookup,rules,distance")
      ->default_val("lookup,rules,distance");

  // --- normalize ---
  auto* cmd_norm = app.add_subcommand("normalize", "apply a trained model to a token stream");
  std::string norm_model, norm_in, norm_out;
  cmd_norm->add_option("--model", norm_model, "trained model file")->required();
  cmd_norm->add_option("input", norm_in, "tokens, one per line (first TAB column is used)")
      ->required();
  cmd_norm->add_option("--out", norm_out, "output file (default: stdout)");

  // --- evaluate ---
  auto* cmd_eval = app.add_subcommand("evaluate", "score a model or a predictions file "
                                                  "against a test set");
  std::string eval_model, eval_predictions, eval_test, eval_train, eval_stemmer, eval_report,
      eval_system;
  cmd_eval->add_option("--model", eval_model, "trained model file");
  cmd_eval->add_option("--predictions", eval_predictions,
                       "external predictions, one per line, aligned with the test set");
  cmd_eval->add_option("test", eval_test, "test pairs (source<TAB>gold)")->required();
  cmd_eval->add_option("--train", eval_train,
                       "training pairs; enables the seen/unseen breakdown");
  cmd_eval->add_option("--stemmer", eval_stemmer, "stemmer language for stem accuracy "
                                                  "(de en es hu pt sv)");
  cmd_eval->add_option("--report", eval_report, "write the full JSON report here");
  cmd_eval->add_option("--system", eval_system, "system name recorded in the report");

  // --- compare ---
  auto* cmd_cmp = app.add_subcommand("compare", "McNemar significance test between two "
                                                "evaluation reports");
  std::string cmp_a, cmp_b;
  cmd_cmp->add_option("report-a", cmp_a, "first JSON report")->required();
  cmd_cmp->add_option("report-b", cmp_b, "second JSON report")->required();

  // --- hybrid ---
  auto* cmd_hyb = app.add_subcommand("hybrid", "lookup on seen tokens, a learned model on "
                                               "unseen tokens");
  std::string hyb_lookup, hyb_backoff, hyb_test, hyb_report, hyb_stemmer;
  cmd_hyb->add_option("--lookup", hyb_lookup, "lookup model file")->required();
  cmd_hyb->add_option("--backoff", hyb_backoff, "backoff model file")->required();
  cmd_hyb->add_option("test", hyb_test, "test pairs")->required();
  cmd_hyb->add_option("--report", hyb_report, "write the hybrid JSON report here");
  cmd_hyb->add_option("--stemmer", hyb_stemmer, "stemmer language for stem accuracy");

  // --- curve ---
  auto* cmd_curve = app.add_subcommand("curve", "learning-curve protocol over equidistant "
                                                "training chunks");
  std::string curve_backend, curve_train, curve_dev, curve_lexicon, curve_out, curve_extra;
  std::vector<std::size_t> curve_sizes;
  int curve_max_splits = kDefaultMaxSplits;
  TrainConfig curve_config;
  cmd_curve->add_option("--backend", curve_backend, "backend to retrain per chunk")
      ->required();
  cmd_curve->add_option("train", curve_train, "training pairs")->required();
  cmd_curve->add_option("dev", curve_dev, "development pairs to score against")->required();
  cmd_curve->add_option("--sizes", curve_sizes,
                        "training sizes (default: 100 250 500 ... 50000, capped)");
  cmd_curve->add_option("--max-splits", curve_max_splits, "chunks per size")
      ->default_val(kDefaultMaxSplits);
  cmd_curve->add_option("--lexicon", curve_lexicon, "lexicon (distance/chain backends)");
  cmd_curve->add_option("--extra-lm-corpus", curve_extra, "extra LM text (channel backend)");
  cmd_curve->add_option("--out", curve_out, "CSV output path")->required();

  CLI11_PARSE(app, argc, argv);

  if (!global.dump_config.empty())
    io::write_file(global.dump_config, app.config_to_str(true, true));

  auto load_extra_corpus = [](const std::string& path) {
    std::vector<std::string> words;
    if (path.empty()) return words;
    const std::string text = io::read_file(path);
    if (!uni::is_valid_utf8(text)) throw ParseError(path + ": invalid UTF-8");
    std::size_t i = 0;
    while (i < text.size()) {
      while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
      const std::size_t start = i;
      while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
      if (i > start) {
        if (auto tok = preprocess_token(text.substr(start, i - start)))
          words.push_back(*tok);
      }
    }
    return words;
  };

  if (cmd_pre->parsed()) {
    const Dataset ds = load_dataset(pre_in, Split::train, {}, /*verify_join_symbol=*/true);
    io::write_file(pre_out, format_dataset(ds));
    info(global, "kept " + std::to_string(ds.pairs.size()) + " pairs, dropped " +
                     std::to_string(ds.dropped));
    return 0;
  }

  if (cmd_lex->parsed()) {
    const Lexicon lex = build_lexicon(lex_corpora, lex_wordlists);
    io::write_file(lex_out, format_lexicon(lex));
    info(global, "lexicon of " + std::to_string(lex.size()) + " types");
    return 0;
  }

  if (cmd_train->parsed()) {
    const Backend backend = backend_from_string(train_backend);
    if (backend == Backend::hybrid)
      throw ConfigError("use the 'hybrid' subcommand to compose hybrid models");
    const Dataset ds = load_dataset(train_path, Split::train);
    std::optional<Lexicon> lexicon;
    if (!train_lexicon.empty()) lexicon = load_lexicon(train_lexicon);
    if ((backend == Backend::distance || backend == Backend::chain) && !lexicon)
      throw ConfigError(train_backend + " backend requires --lexicon");
    train_config.extra_lm_corpus = load_extra_corpus(train_extra);
    train_config.chain_lookup = chain_components.find("lookup") != std::string::npos;
    train_config.chain_rules = chain_components.find("rules") != std::string::npos;
    train_config.chain_distance = chain_components.find("distance") != std::string::npos;
    const NormalizerModel model = train(backend, ds, lexicon, train_config);
    save_model(model, train_out);
    info(global, "trained " + train_backend + " on " + std::to_string(ds.pairs.size()) +
                     " pairs (vocabulary " + std::to_string(model.source_vocabulary.size()) +
                     " types)");
    return 0;
  }

  if (cmd_norm->parsed()) {
    const NormalizerModel model = load_model(norm_model);
    std::vector<std::string> tokens;
    for (const std::string& line : io::split_lines(io::read_file(norm_in))) {
      if (line.empty()) continue;
      const std::size_t tab = line.find('\t');
      tokens.push_back(canonicalize_prediction(
          tab == std::string::npos ? line : line.substr(0, tab)));
    }
    const auto outputs = normalize_all(model, tokens, global.threads);
    std::string text;
    for (const auto& o : outputs) {
      text += o;
      text += '\n';
    }
    if (norm_out.empty())
      std::fputs(text.c_str(), stdout);
    else
      io::write_file(norm_out, text);
    return 0;
  }

  if (cmd_eval->parsed()) {
    if (eval_model.empty() == eval_predictions.empty())
      throw ConfigError("evaluate needs exactly one of --model or --predictions");
    const Dataset test = load_dataset(eval_test, Split::test);
    if (test.pairs.empty()) throw EvalError("test set is empty after preprocessing");
    const auto sources = sources_of(test);
    const auto golds = targets_of(test);

    std::vector<std::string> preds;
    std::string system = eval_system;
    if (!eval_model.empty()) {
      const NormalizerModel model = load_model(eval_model);
      preds = normalize_all(model, sources, global.threads);
      if (system.empty()) system = to_string(model.backend);
    } else {
      preds = load_predictions(eval_predictions);
      if (preds.size() != sources.size())
        throw EvalError("predictions file has " + std::to_string(preds.size()) +
                        " lines but the test set has " + std::to_string(sources.size()) +
                        " tokens");
      if (system.empty()) system = "external";
    }

    EvalOptions options;
    options.system = system;
    if (!eval_train.empty())
      options.train_vocab = vocabulary_of(load_dataset(eval_train, Split::train));
    if (!eval_stemmer.empty()) options.stemmer_language = eval_stemmer;

    const EvalReport report = evaluate(sources, golds, preds, options);
    print_report_summary(report);
    if (!eval_report.empty())
      io::write_file(eval_report, report_to_json(report).dump(2) + "\n");
    return 0;
  }

  if (cmd_cmp->parsed()) {
    const EvalReport a = report_from_json(nlohmann::json::parse(io::read_file(cmp_a)));
    const EvalReport b = report_from_json(nlohmann::json::parse(io::read_file(cmp_b)));
    const Contingency c = make_contingency(a.per_token_correctness, b.per_token_correctness);
    print_mcnemar(c, mcnemar(c));
    return 0;
  }

  if (cmd_hyb->parsed()) {
    const NormalizerModel hybrid =
        make_hybrid(load_model(hyb_lookup), load_model(hyb_backoff));
    const Dataset test = load_dataset(hyb_test, Split::test);
    if (test.pairs.empty()) throw EvalError("test set is empty after preprocessing");
    const auto sources = sources_of(test);
    const auto golds = targets_of(test);

    const auto hybrid_preds = normalize_all(hybrid, sources, global.threads);
    const auto& backoff = *std::get<HybridModel>(hybrid.state).backoff;
    const auto backoff_preds = normalize_all(backoff, sources, global.threads);

    EvalOptions options;
    options.system = "hybrid(lookup," + to_string(backoff.backend) + ")";
    options.train_vocab =
        std::set<std::string>(hybrid.source_vocabulary.begin(),
                              hybrid.source_vocabulary.end());
    if (!hyb_stemmer.empty()) options.stemmer_language = hyb_stemmer;
    const EvalReport hybrid_report = evaluate(sources, golds, hybrid_preds, options);

    EvalOptions backoff_options = options;
    backoff_options.system = to_string(backoff.backend);
    const EvalReport backoff_report = evaluate(sources, golds, backoff_preds, backoff_options);

    print_report_summary(hybrid_report);
    std::printf("\nbackoff alone     %.4f\n", backoff_report.word_accuracy);
    std::printf("hybrid            %.4f (%+.4f)\n", hybrid_report.word_accuracy,
                hybrid_report.word_accuracy - backoff_report.word_accuracy);
    const Contingency c = make_contingency(hybrid_report.per_token_correctness,
                                           backoff_report.per_token_correctness);
    print_mcnemar(c, mcnemar(c));
    if (!hyb_report.empty())
      io::write_file(hyb_report, report_to_json(hybrid_report).dump(2) + "\n");
    return 0;
  }

  if (cmd_curve->parsed()) {
    const Backend backend = backend_from_string(curve_backend);
    const Dataset train_ds = load_dataset(curve_train, Split::train);
    const Dataset dev = load_dataset(curve_dev, Split::dev);
    if (dev.pairs.empty()) throw EvalError("dev set is empty after preprocessing");
    std::optional<Lexicon> lexicon;
    if (!curve_lexicon.empty()) lexicon = load_lexicon(curve_lexicon);
    if ((backend == Backend::distance || backend == Backend::chain) && !lexicon)
      throw ConfigError(curve_backend + " backend requires --lexicon");
    curve_config.extra_lm_corpus = load_extra_corpus(curve_extra);

    std::vector<std::size_t> sizes =
        curve_sizes.empty() ? default_curve_sizes(train_ds.pairs.size()) : curve_sizes;
    std::sort(sizes.begin(), sizes.end());
    std::vector<std::size_t> usable;
    for (std::size_t n : sizes) {
      if (n == 0 || n > train_ds.pairs.size()) {
        info(global, "skipping size " + std::to_string(n) + " (training set has " +
                         std::to_string(train_ds.pairs.size()) + " pairs)");
        continue;
      }
      usable.push_back(n);
    }

    const auto dev_sources = sources_of(dev);
    const auto dev_golds = targets_of(dev);
    const auto points = learning_curve(
        train_ds, usable, static_cast<std::size_t>(curve_max_splits),
        [&](const Dataset& chunk) { return train(backend, chunk, lexicon, curve_config); },
        [&](const NormalizerModel& model) {
          return word_accuracy(dev_golds, normalize_all(model, dev_sources, global.threads));
        });
    io::write_file(curve_out, curve_to_csv(curve_backend, points));
    info(global, "wrote " + curve_out);
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
