#ifndef SENSESHIFT_EVALUATION_H_
#define SENSESHIFT_EVALUATION_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace senseshift {

using LabelMap = std::map<std::string, int>;
using ScoreMap = std::map<std::string, double>;

// Fraction of gold words whose predicted label matches. Throws InputError
// naming the first gold word without a prediction.
double Accuracy(const LabelMap& pred, const LabelMap& gold);

// Spearman rank correlation over words present in both maps, with average
// ranks for ties. Undefined for fewer than two common words or when either
// side is constant.
std::optional<double> Spearman(const ScoreMap& pred, const ScoreMap& gold);

// Average ranks (1-based) of the values, ties sharing their mean rank.
std::vector<double> AverageRanks(const std::vector<double>& values);

// "word<TAB>value" per line. Throws InputError on malformed lines or
// repeated words.
std::vector<std::pair<std::string, double>> ReadAnswerFile(
    const std::filesystem::path& path);
LabelMap ReadLabels(const std::filesystem::path& path);
ScoreMap ReadScores(const std::filesystem::path& path);

// Plain decimal (no exponent) carrying at least nine significant digits.
std::string FormatScore(double value);

struct GoldRecord {
  std::string word;
  int label = 0;       // binary change
  double score = 0.0;  // graded change
};

struct SyntheticSpec {
  int vocab_size = 500;
  int n_topics = 10;
  int docs_per_corpus = 2000;
  int doc_length = 12;
  int n_shift_words = 10;
  int n_stable_words = 40;
  double shift_magnitude = 1.0;
  // Share of a target's occurrences drawn from its dominant topic; the
  // remainder comes from its secondary topic.
  double dominant_weight = 0.9;
  std::uint64_t seed = 42;

  // Throws ConfigError for infeasible combinations.
  void Validate() const;
};

struct SyntheticBenchmark {
  std::vector<std::string> reference;  // one document per line
  std::vector<std::string> focus;
  std::vector<std::string> targets;
  std::vector<GoldRecord> gold;  // in target order
};

// Targets get a dominant and a secondary topic. Stable targets keep the
// same mixture in both corpora; shift targets move toward the swapped
// mixture by shift_magnitude in the focus corpus. Deterministic per seed.
SyntheticBenchmark GenerateSynthetic(const SyntheticSpec& spec);

// Writes reference.txt, focus.txt, targets.txt and
// truth/task1/<language>.txt, truth/task2/<language>.txt under dir.
void WriteSynthetic(const SyntheticBenchmark& bench,
                    const std::filesystem::path& dir,
                    const std::string& language = "english");

}  // namespace senseshift

#endif  // SENSESHIFT_EVALUATION_H_
