#ifndef SENSESHIFT_COOCCURRENCE_H_
#define SENSESHIFT_COOCCURRENCE_H_

#include <cstdint>
#include <filesystem>
#include <unordered_map>
#include <utility>
#include <vector>

#include "senseshift/corpus.h"

namespace senseshift {

// Packs an ordered (target, context) pair into one hash key.
inline std::uint64_t PairKey(WordId target, WordId context) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(target)) << 32) |
         static_cast<std::uint32_t>(context);
}
inline std::pair<WordId, WordId> UnpackPairKey(std::uint64_t key) {
  return {static_cast<WordId>(key >> 32),
          static_cast<WordId>(key & 0xffffffffu)};
}

// Sparse windowed co-occurrence counts.
struct CountMatrix {
  std::unordered_map<std::uint64_t, std::int64_t> counts;
  std::vector<std::int64_t> row_totals;  // indexed by target id
  std::vector<std::int64_t> col_totals;  // indexed by context id
  std::int64_t total = 0;

  std::int64_t Count(WordId target, WordId context) const;
};

class PpmiMatrix {
 public:
  // Zero for pairs that are not stored.
  double Weight(WordId target, WordId context) const;
  void Set(WordId target, WordId context, double weight);

  std::size_t size() const { return weights_.size(); }
  bool empty() const { return weights_.empty(); }
  const std::unordered_map<std::uint64_t, double>& weights() const {
    return weights_;
  }

 private:
  std::unordered_map<std::uint64_t, double> weights_;
};

// Counts (token_i, token_j) for every j != i with |i - j| <= window inside
// one document. Throws ConfigError when window < 1.
CountMatrix BuildCooccurrence(const std::vector<PseudoDocument>& docs,
                              std::size_t vocab_size, int window);

// weight(w, c) = max(0, log2(p(w,c) / (p(w) p(c)))); non-positive values
// are not stored.
PpmiMatrix ComputePpmi(const CountMatrix& m);

// Writes "word<TAB>context<TAB>weight" lines sorted by (word id, context id).
void WritePpmi(const std::filesystem::path& path, const PpmiMatrix& ppmi,
               const Vocabulary& vocab);

}  // namespace senseshift

#endif  // SENSESHIFT_COOCCURRENCE_H_
