#ifndef SENSESHIFT_PIPELINE_H_
#define SENSESHIFT_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "senseshift/change_detection.h"
#include "senseshift/corpus.h"
#include "senseshift/evaluation.h"
#include "senseshift/hdp_sampler.h"

namespace senseshift {

// Bundled English stopword list (compiled in from data/stopwords_en.txt).
const std::unordered_set<std::string>& DefaultStopwords();

// Mixes a named substream into the run seed so every stochastic stage gets
// its own reproducible stream.
std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view stream);

struct RunConfig {
  std::filesystem::path reference_path;
  std::filesystem::path focus_path;
  std::filesystem::path targets_path;
  // Unset: bundled list. "none": no stopwords.
  std::optional<std::filesystem::path> stopwords_path;
  int window = 2;
  std::int64_t min_freq_floor = 1;
  FloorComparator floor_comparator = FloorComparator::kStrictlyBelow;
  bool lowercase = true;
  double alpha = 1.0;
  double gamma = 1.0;
  double beta = 0.01;
  int iterations = 1;
  double threshold = 0.6;
  std::uint64_t seed = 42;
  WeightingMode weighting_mode = WeightingMode::kCount;
  JsdMode jsd_mode = JsdMode::kDistance;
  std::size_t top_n = 25;
  std::filesystem::path output_dir = "out";
  std::string language = "english";
  bool write_snapshot = false;
  bool dump_ppmi = false;

  Hyperparams SamplerHyperparams() const;
  PreprocessConfig Preprocess() const;
  // Throws ConfigError on out-of-range values.
  void Validate() const;
};

struct TopicSummary {
  int topic = 0;
  int tables = 0;
  double mass = 0.0;
  std::vector<std::pair<std::string, double>> top_words;
};

struct DetectionOutcome {
  std::vector<ChangeResult> results;      // target file order
  std::vector<SenseProfile> profiles;     // parallel to results
  std::vector<TopicSummary> topics;
  std::size_t vocab_size = 0;
  std::size_t num_docs = 0;
  std::filesystem::path task1_path;
  std::filesystem::path task2_path;
  std::filesystem::path report_path;
};

struct NoveltyOutcome {
  std::vector<ChangeResult> ranking;  // top_n by novelty
  std::vector<NoveltyScore> breakdown;  // parallel to ranking
  std::filesystem::path ranking_path;
  std::filesystem::path report_path;
};

struct TaskScores {
  std::string language;
  std::optional<double> accuracy;
  std::optional<double> spearman;
  bool has_task1 = false;
  bool has_task2 = false;
};

// Writes <output>/answer/task1/<language>.txt (word<TAB>0/1),
// <output>/answer/task2/<language>.txt (word<TAB>score) and
// <output>/report.txt. Targets unknown to the vocabulary or absent from one
// corpus get label 0 and score 0 and are flagged in the report.
DetectionOutcome RunChangeDetection(const RunConfig& cfg);

// Ranks targets (or the whole vocabulary when targets_path is empty) by
// novelty. Writes <output>/novelty.tsv (top_n lines, word<TAB>score) and
// <output>/novelty_report.txt with per-sense breakdowns.
NoveltyOutcome RunNovelty(const RunConfig& cfg);

// Scores every gold file under gold_dir/task1 and gold_dir/task2 against
// the same file name under pred_dir. Throws InputError on layout mismatch.
std::vector<TaskScores> RunEval(const std::filesystem::path& pred_dir,
                                const std::filesystem::path& gold_dir);
void PrintScores(std::ostream& out, const std::vector<TaskScores>& scores);

SyntheticBenchmark RunSynthetic(const SyntheticSpec& spec,
                                const std::filesystem::path& output_dir,
                                const std::string& language = "english");

}  // namespace senseshift

#endif  // SENSESHIFT_PIPELINE_H_
