// senseshift: sense-induction based lexical semantic change detection.
//
//   senseshift detect  --reference-path A --focus-path B --targets-path T
//   senseshift novelty --reference-path A --focus-path B [--targets-path T]
//   senseshift eval    --pred-dir out/answer --gold-dir truth
//   senseshift synth   --output-dir bench

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>

#include "senseshift/errors.h"
#include "senseshift/pipeline.h"

namespace {

using senseshift::RunConfig;

struct RunFlags {
  std::string stopwords_path;
  std::string weighting_mode = "count";
  std::string jsd_mode = "distance";
  std::string floor_comparator = "lt";
  bool no_lowercase = false;
};

void AddRunFlags(CLI::App* app, RunConfig& cfg, RunFlags& flags,
                 bool targets_required) {
  app->add_option("--reference-path", cfg.reference_path,
                  "Reference (older) corpus, one pseudo-document per line")
      ->required();
  app->add_option("--focus-path", cfg.focus_path,
                  "Focus (newer) corpus, one pseudo-document per line")
      ->required();
  auto* targets = app->add_option("--targets-path", cfg.targets_path,
                                  "Target words, one per line");
  if (targets_required) targets->required();
  app->add_option("--stopwords-path", flags.stopwords_path,
                  "Stopword file (default: bundled English list; 'none' disables)");
  app->add_option("--window", cfg.window, "Co-occurrence window")
      ->capture_default_str();
  app->add_option("--min-freq-floor", cfg.min_freq_floor,
                  "Drop words whose pooled frequency is below this floor")
      ->capture_default_str();
  app->add_option("--floor-comparator", flags.floor_comparator,
                  "lt: drop freq < floor, le: drop freq <= floor")
      ->check(CLI::IsMember({"lt", "le"}))
      ->capture_default_str();
  app->add_flag("--no-lowercase", flags.no_lowercase, "Disable ASCII case folding");
  app->add_option("--alpha", cfg.alpha, "Document-level concentration")
      ->capture_default_str();
  app->add_option("--gamma", cfg.gamma, "Corpus-level concentration")
      ->capture_default_str();
  app->add_option("--beta", cfg.beta, "Topic-word Dirichlet smoothing")
      ->capture_default_str();
  app->add_option("--iterations", cfg.iterations, "Gibbs sweeps")
      ->capture_default_str();
  app->add_option("--threshold", cfg.threshold, "Change threshold on JSD")
      ->capture_default_str();
  app->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  app->add_option("--weighting-mode", flags.weighting_mode, "count or ppmi")
      ->check(CLI::IsMember({"count", "ppmi"}, CLI::ignore_case))
      ->capture_default_str();
  app->add_option("--jsd-mode", flags.jsd_mode, "distance or divergence")
      ->check(CLI::IsMember({"distance", "divergence"}, CLI::ignore_case))
      ->capture_default_str();
  app->add_option("--top-n", cfg.top_n, "Words kept in rankings (0 = all)")
      ->capture_default_str();
  app->add_option("--output-dir", cfg.output_dir, "Output directory")
      ->capture_default_str();
  app->add_option("--language", cfg.language, "Language tag for answer files")
      ->capture_default_str();
  app->add_flag("--snapshot", cfg.write_snapshot,
                "Write the final sampler state to state.tsv");
  app->add_flag("--dump-ppmi", cfg.dump_ppmi, "Write the PPMI matrix to ppmi.tsv");
}

void ApplyFlags(RunConfig& cfg, const RunFlags& flags) {
  if (!flags.stopwords_path.empty()) cfg.stopwords_path = flags.stopwords_path;
  cfg.weighting_mode = senseshift::ParseWeightingMode(flags.weighting_mode);
  cfg.jsd_mode = senseshift::ParseJsdMode(flags.jsd_mode);
  cfg.floor_comparator = flags.floor_comparator == "le"
                             ? senseshift::FloorComparator::kAtOrBelow
                             : senseshift::FloorComparator::kStrictlyBelow;
  cfg.lowercase = !flags.no_lowercase;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lexical semantic change detection with HDP word sense induction"};
  app.require_subcommand(1);

  RunConfig detect_cfg, novelty_cfg;
  RunFlags detect_flags, novelty_flags;
  auto* detect = app.add_subcommand("detect", "Binary change labels and graded JSD scores");
  AddRunFlags(detect, detect_cfg, detect_flags, /*targets_required=*/true);
  auto* novelty = app.add_subcommand("novelty", "Rank words by novel-sense gain");
  AddRunFlags(novelty, novelty_cfg, novelty_flags, /*targets_required=*/false);

  std::string pred_dir, gold_dir;
  auto* eval = app.add_subcommand("eval", "Score answer files against gold files");
  eval->add_option("--pred-dir", pred_dir, "Directory holding task1/ and task2/ answers")
      ->required();
  eval->add_option("--gold-dir", gold_dir, "Directory holding task1/ and task2/ gold")
      ->required();

  senseshift::SyntheticSpec spec;
  std::string synth_dir = "synthetic";
  std::string synth_language = "english";
  auto* synth = app.add_subcommand("synth", "Generate a two-corpus benchmark with planted shifts");
  synth->add_option("--vocab-size", spec.vocab_size)->capture_default_str();
  synth->add_option("--n-topics", spec.n_topics)->capture_default_str();
  synth->add_option("--docs-per-corpus", spec.docs_per_corpus)->capture_default_str();
  synth->add_option("--doc-length", spec.doc_length)->capture_default_str();
  synth->add_option("--n-shift-words", spec.n_shift_words)->capture_default_str();
  synth->add_option("--n-stable-words", spec.n_stable_words)->capture_default_str();
  synth->add_option("--shift-magnitude", spec.shift_magnitude)->capture_default_str();
  synth->add_option("--dominant-weight", spec.dominant_weight)->capture_default_str();
  synth->add_option("--seed", spec.seed)->capture_default_str();
  synth->add_option("--output-dir", synth_dir)->capture_default_str();
  synth->add_option("--language", synth_language)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (detect->parsed()) {
      ApplyFlags(detect_cfg, detect_flags);
      auto outcome = senseshift::RunChangeDetection(detect_cfg);
      std::size_t missing = 0, undefined = 0;
      for (const auto& r : outcome.results) {
        if (r.missing) {
          ++missing;
        } else if (!r.jsd) {
          ++undefined;
        }
      }
      std::cout << "targets " << outcome.results.size() << " (missing " << missing
                << ", undefined " << undefined << "), live topics "
                << outcome.topics.size() << '\n'
                << "wrote " << outcome.task1_path.string() << '\n'
                << "wrote " << outcome.task2_path.string() << '\n'
                << "wrote " << outcome.report_path.string() << '\n';
    } else if (novelty->parsed()) {
      ApplyFlags(novelty_cfg, novelty_flags);
      auto outcome = senseshift::RunNovelty(novelty_cfg);
      for (const auto& r : outcome.ranking) {
        std::cout << r.word << '\t' << senseshift::FormatScore(r.novelty) << '\n';
      }
      std::cerr << "wrote " << outcome.ranking_path.string() << " and "
                << outcome.report_path.string() << '\n';
    } else if (eval->parsed()) {
      senseshift::PrintScores(std::cout, senseshift::RunEval(pred_dir, gold_dir));
    } else if (synth->parsed()) {
      spec.seed = senseshift::DeriveSeed(spec.seed, "synthetic");
      auto bench = senseshift::RunSynthetic(spec, synth_dir, synth_language);
      std::cout << "wrote " << bench.reference.size() << " + " << bench.focus.size()
                << " documents and " << bench.targets.size() << " targets to "
                << synth_dir << '\n';
    }
  } catch (const senseshift::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const senseshift::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
