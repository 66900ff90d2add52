#include "senseshift/cooccurrence.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

#include "senseshift/errors.h"

namespace senseshift {

std::int64_t CountMatrix::Count(WordId target, WordId context) const {
  auto it = counts.find(PairKey(target, context));
  return it == counts.end() ? 0 : it->second;
}

double PpmiMatrix::Weight(WordId target, WordId context) const {
  auto it = weights_.find(PairKey(target, context));
  return it == weights_.end() ? 0.0 : it->second;
}

void PpmiMatrix::Set(WordId target, WordId context, double weight) {
  if (weight > 0.0) {
    weights_[PairKey(target, context)] = weight;
  } else {
    weights_.erase(PairKey(target, context));
  }
}

CountMatrix BuildCooccurrence(const std::vector<PseudoDocument>& docs,
                              std::size_t vocab_size, int window) {
  if (window < 1) {
    throw ConfigError("window must be >= 1, got " + std::to_string(window));
  }
  CountMatrix m;
  m.row_totals.assign(vocab_size, 0);
  m.col_totals.assign(vocab_size, 0);
  const auto w = static_cast<std::size_t>(window);
  for (const PseudoDocument& doc : docs) {
    const std::vector<WordId>& toks = doc.tokens;
    const std::size_t n = toks.size();
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t lo = i >= w ? i - w : 0;
      const std::size_t hi = std::min(n - 1, i + w);
      for (std::size_t j = lo; j <= hi; ++j) {
        if (j == i) continue;
        ++m.counts[PairKey(toks[i], toks[j])];
        ++m.row_totals[toks[i]];
        ++m.col_totals[toks[j]];
        ++m.total;
      }
    }
  }
  return m;
}

PpmiMatrix ComputePpmi(const CountMatrix& m) {
  PpmiMatrix ppmi;
  if (m.total <= 0) return ppmi;
  const double total = static_cast<double>(m.total);
  for (const auto& [key, count] : m.counts) {
    if (count <= 0) continue;
    auto [w, c] = UnpackPairKey(key);
    const double p_wc = static_cast<double>(count) / total;
    const double p_w = static_cast<double>(m.row_totals[w]) / total;
    const double p_c = static_cast<double>(m.col_totals[c]) / total;
    const double pmi = std::log2(p_wc / (p_w * p_c));
    if (pmi > 0.0) ppmi.Set(w, c, pmi);
  }
  return ppmi;
}

void WritePpmi(const std::filesystem::path& path, const PpmiMatrix& ppmi,
               const Vocabulary& vocab) {
  std::vector<std::pair<std::uint64_t, double>> entries(ppmi.weights().begin(),
                                                        ppmi.weights().end());
  std::sort(entries.begin(), entries.end());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << std::setprecision(17);
  for (const auto& [key, weight] : entries) {
    auto [w, c] = UnpackPairKey(key);
    out << vocab.Word(w) << '\t' << vocab.Word(c) << '\t' << weight << '\n';
  }
}

}  // namespace senseshift
