#ifndef SENSESHIFT_SENSE_PROFILE_H_
#define SENSESHIFT_SENSE_PROFILE_H_

#include <cstdint>
#include <map>
#include <optional>

#include "senseshift/corpus.h"

namespace senseshift {

// Probability per topic index. Ordered so iteration is deterministic.
using SenseDistribution = std::map<int, double>;

// A word's topic usage in each corpus. An empty optional means the word
// never occurs under that label (ABSENT).
struct SenseProfile {
  WordId word = kUnknownWord;
  bool missing = false;  // not in the vocabulary at all
  std::optional<SenseDistribution> p_ref;
  std::optional<SenseDistribution> p_focus;
  std::int64_t n_ref = 0;
  std::int64_t n_focus = 0;
};

}  // namespace senseshift

#endif  // SENSESHIFT_SENSE_PROFILE_H_
