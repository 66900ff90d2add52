#include "senseshift/evaluation.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "senseshift/errors.h"
#include "senseshift/hdp_sampler.h"

namespace senseshift {

double Accuracy(const LabelMap& pred, const LabelMap& gold) {
  if (gold.empty()) throw InputError("gold labels are empty");
  std::size_t hits = 0;
  for (const auto& [word, label] : gold) {
    auto it = pred.find(word);
    if (it == pred.end()) throw InputError("no prediction for gold word: " + word);
    if (it->second == label) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(gold.size());
}

std::vector<double> AverageRanks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t k = i;
    while (k + 1 < order.size() && values[order[k + 1]] == values[order[i]]) ++k;
    // Positions i..k (0-based) share ranks i+1..k+1.
    const double mean = 0.5 * static_cast<double>(i + k) + 1.0;
    for (std::size_t r = i; r <= k; ++r) ranks[order[r]] = mean;
    i = k + 1;
  }
  return ranks;
}

std::optional<double> Spearman(const ScoreMap& pred, const ScoreMap& gold) {
  std::vector<double> x, y;
  for (const auto& [word, g] : gold) {
    auto it = pred.find(word);
    if (it == pred.end()) continue;
    x.push_back(it->second);
    y.push_back(g);
  }
  if (x.size() < 2) return std::nullopt;
  // Pearson correlation of the average ranks.
  const std::vector<double> rx = AverageRanks(x);
  const std::vector<double> ry = AverageRanks(y);
  const double n = static_cast<double>(rx.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<std::pair<std::string, double>> ReadAnswerFile(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open answer file: " + path.string());
  std::vector<std::pair<std::string, double>> rows;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw InputError(where + ": expected word<TAB>value");
    std::string word = line.substr(0, tab);
    std::string value = line.substr(tab + 1);
    double v = 0.0;
    std::size_t used = 0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception&) {
      throw InputError(where + ": bad value '" + value + "'");
    }
    if (used != value.size() || word.empty()) {
      throw InputError(where + ": bad value '" + value + "'");
    }
    if (!seen.insert(word).second) throw InputError(where + ": repeated word " + word);
    rows.emplace_back(std::move(word), v);
  }
  return rows;
}

LabelMap ReadLabels(const std::filesystem::path& path) {
  LabelMap out;
  for (const auto& [word, v] : ReadAnswerFile(path)) {
    if (v != 0.0 && v != 1.0) {
      throw InputError(path.string() + ": label for " + word + " is not 0/1");
    }
    out[word] = static_cast<int>(v);
  }
  return out;
}

ScoreMap ReadScores(const std::filesystem::path& path) {
  ScoreMap out;
  for (const auto& [word, v] : ReadAnswerFile(path)) out[word] = v;
  return out;
}

std::string FormatScore(double value) {
  int decimals = 9;
  if (value != 0.0 && std::isfinite(value)) {
    const int magnitude = static_cast<int>(std::floor(std::log10(std::abs(value))));
    decimals = std::clamp(8 - magnitude, 6, 30);
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

void SyntheticSpec::Validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("synthetic spec: " + msg); };
  if (vocab_size <= 0 || n_topics <= 0 || docs_per_corpus <= 0 || doc_length <= 0 ||
      n_shift_words < 0 || n_stable_words < 0) {
    fail("all counts must be positive");
  }
  if (n_shift_words + n_stable_words <= 0) fail("need at least one target word");
  if (n_topics < 2) fail("need at least two topics");
  if (doc_length < 2) fail("doc_length must be >= 2");
  if (n_shift_words + n_stable_words + n_topics > vocab_size) {
    fail("vocab_size too small for the targets plus one context word per topic");
  }
  if (!(shift_magnitude >= 0.0 && shift_magnitude <= 1.0)) {
    fail("shift_magnitude must lie in [0, 1]");
  }
  if (!(dominant_weight >= 0.0 && dominant_weight <= 1.0)) {
    fail("dominant_weight must lie in [0, 1]");
  }
}

SyntheticBenchmark GenerateSynthetic(const SyntheticSpec& spec) {
  spec.Validate();
  Rng rng(spec.seed);
  auto uniform_int = [&](int n) {
    return std::min(n - 1, static_cast<int>(rng.Uniform() * n));
  };

  const int n_targets = spec.n_shift_words + spec.n_stable_words;
  const int width = static_cast<int>(std::to_string(spec.vocab_size - 1).size());
  std::vector<std::string> words(static_cast<std::size_t>(spec.vocab_size));
  for (int v = 0; v < spec.vocab_size; ++v) {
    std::string digits = std::to_string(v);
    words[v] = "w" + std::string(static_cast<std::size_t>(width) - digits.size(), '0') + digits;
  }

  // Context words split into contiguous per-topic slices.
  const int n_context = spec.vocab_size - n_targets;
  std::vector<int> slice_begin(spec.n_topics + 1);
  for (int k = 0; k <= spec.n_topics; ++k) {
    slice_begin[k] = n_targets + static_cast<int>(
        static_cast<std::int64_t>(n_context) * k / spec.n_topics);
  }

  // Shift/stable roles are a seeded permutation of the target ids.
  std::vector<int> role(n_targets);
  std::iota(role.begin(), role.end(), 0);
  for (int i = n_targets - 1; i > 0; --i) std::swap(role[i], role[uniform_int(i + 1)]);
  std::vector<bool> is_shift(n_targets, false);
  for (int i = 0; i < spec.n_shift_words; ++i) is_shift[role[i]] = true;

  std::vector<int> dominant(n_targets), secondary(n_targets);
  for (int t = 0; t < n_targets; ++t) {
    dominant[t] = uniform_int(spec.n_topics);
    secondary[t] = (dominant[t] + 1 + uniform_int(spec.n_topics - 1)) % spec.n_topics;
  }

  auto make_doc = [&](int target, double p_dominant) {
    const int topic = rng.Uniform() < p_dominant ? dominant[target] : secondary[target];
    const int lo = slice_begin[topic];
    const int span = slice_begin[topic + 1] - lo;
    const int target_pos = uniform_int(spec.doc_length);
    std::string line;
    for (int i = 0; i < spec.doc_length; ++i) {
      if (i > 0) line.push_back(' ');
      line += i == target_pos ? words[target] : words[lo + uniform_int(span)];
    }
    return line;
  };

  SyntheticBenchmark bench;
  const double dw = spec.dominant_weight;
  for (int d = 0; d < spec.docs_per_corpus; ++d) {
    bench.reference.push_back(make_doc(d % n_targets, dw));
  }
  for (int d = 0; d < spec.docs_per_corpus; ++d) {
    const int t = d % n_targets;
    const double s = is_shift[t] ? spec.shift_magnitude : 0.0;
    bench.focus.push_back(make_doc(t, (1.0 - s) * dw + s * (1.0 - dw)));
  }
  for (int t = 0; t < n_targets; ++t) {
    bench.targets.push_back(words[t]);
    bench.gold.push_back(GoldRecord{words[t], is_shift[t] ? 1 : 0,
                                    is_shift[t] ? spec.shift_magnitude : 0.0});
  }
  return bench;
}

namespace {

void WriteLines(const std::filesystem::path& path,
                const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  for (const std::string& line : lines) out << line << '\n';
}

}  // namespace

void WriteSynthetic(const SyntheticBenchmark& bench,
                    const std::filesystem::path& dir,
                    const std::string& language) {
  std::filesystem::create_directories(dir / "truth" / "task1");
  std::filesystem::create_directories(dir / "truth" / "task2");
  WriteLines(dir / "reference.txt", bench.reference);
  WriteLines(dir / "focus.txt", bench.focus);
  WriteLines(dir / "targets.txt", bench.targets);
  std::vector<std::string> task1, task2;
  for (const GoldRecord& g : bench.gold) {
    task1.push_back(g.word + "\t" + std::to_string(g.label));
    task2.push_back(g.word + "\t" + FormatScore(g.score));
  }
  WriteLines(dir / "truth" / "task1" / (language + ".txt"), task1);
  WriteLines(dir / "truth" / "task2" / (language + ".txt"), task2);
}

}  // namespace senseshift
