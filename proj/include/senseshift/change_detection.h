#ifndef SENSESHIFT_CHANGE_DETECTION_H_
#define SENSESHIFT_CHANGE_DETECTION_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "senseshift/sense_profile.h"

namespace senseshift {

enum class JsdMode : std::uint8_t {
  kDistance,    // sqrt of the divergence, base 2
  kDivergence,  // the divergence itself, base 2
};

JsdMode ParseJsdMode(std::string_view name);

// Jensen-Shannon distance (or divergence) with base-2 logs over the union
// of both supports. Missing keys count as zero mass.
double JensenShannon(const SenseDistribution& p, const SenseDistribution& q,
                     JsdMode mode = JsdMode::kDistance);

// Undefined when either side is absent.
std::optional<double> JensenShannon(const SenseProfile& profile,
                                    JsdMode mode = JsdMode::kDistance);

// Throws ConfigError unless threshold is in [0, 1].
void ValidateThreshold(double threshold);

// Strictly above the threshold counts as changed.
bool Classify(double jsd, double threshold);

struct NoveltyScore {
  double score = 0.0;                    // max over senses
  std::map<int, double> per_sense;       // p_focus(s) - p_ref(s)
};

// An absent side is treated as all zeros.
NoveltyScore NoveltyDiff(const SenseProfile& profile);

struct ChangeResult {
  std::string word;
  bool missing = false;
  std::optional<double> jsd;
  std::optional<bool> changed;
  double novelty = 0.0;
  std::int64_t pooled_freq = 0;
};

// Scores one profile. `changed` is set exactly when `jsd` is.
ChangeResult ScoreProfile(const SenseProfile& profile, std::string word,
                          std::int64_t pooled_freq, double threshold,
                          JsdMode mode = JsdMode::kDistance);

enum class RankKey : std::uint8_t { kJsd, kNovelty };

// Descending by key, then by pooled frequency, then by word. Undefined
// scores sort last. n == 0 keeps everything.
std::vector<ChangeResult> RankWords(std::vector<ChangeResult> results,
                                    RankKey key, std::size_t n);

}  // namespace senseshift

#endif  // SENSESHIFT_CHANGE_DETECTION_H_
