#include "senseshift/change_detection.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "senseshift/errors.h"

namespace senseshift {

namespace {

double Mass(const SenseDistribution& d, int k) {
  auto it = d.find(k);
  return it == d.end() ? 0.0 : it->second;
}

// p * log2(p / m) with 0 log 0 = 0.
double KlTerm(double p, double m) { return p > 0.0 ? p * std::log2(p / m) : 0.0; }

}  // namespace

JsdMode ParseJsdMode(std::string_view name) {
  std::string lower = AsciiLower(name);
  if (lower == "distance") return JsdMode::kDistance;
  if (lower == "divergence") return JsdMode::kDivergence;
  throw ConfigError("unknown JSD mode: " + std::string(name));
}

double JensenShannon(const SenseDistribution& p, const SenseDistribution& q,
                     JsdMode mode) {
  std::set<int> support;
  for (const auto& [k, v] : p) support.insert(k);
  for (const auto& [k, v] : q) support.insert(k);
  double kl_p = 0.0;
  double kl_q = 0.0;
  for (int k : support) {
    const double pk = Mass(p, k);
    const double qk = Mass(q, k);
    const double mk = 0.5 * (pk + qk);
    kl_p += KlTerm(pk, mk);
    kl_q += KlTerm(qk, mk);
  }
  // Summation order differs between (p, q) and (q, p) only through
  // kl_p + kl_q, which is commutative, so the result is exactly symmetric.
  double divergence = 0.5 * kl_p + 0.5 * kl_q;
  divergence = std::clamp(divergence, 0.0, 1.0);
  return mode == JsdMode::kDistance ? std::sqrt(divergence) : divergence;
}

std::optional<double> JensenShannon(const SenseProfile& profile, JsdMode mode) {
  if (profile.missing || !profile.p_ref || !profile.p_focus) return std::nullopt;
  return JensenShannon(*profile.p_ref, *profile.p_focus, mode);
}

void ValidateThreshold(double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw ConfigError("threshold must lie in [0, 1], got " +
                      std::to_string(threshold));
  }
}

bool Classify(double jsd, double threshold) {
  ValidateThreshold(threshold);
  return jsd > threshold;
}

NoveltyScore NoveltyDiff(const SenseProfile& profile) {
  static const SenseDistribution kEmpty;
  const SenseDistribution& pr = profile.p_ref ? *profile.p_ref : kEmpty;
  const SenseDistribution& pf = profile.p_focus ? *profile.p_focus : kEmpty;
  NoveltyScore out;
  for (const auto& [k, v] : pr) out.per_sense[k] = Mass(pf, k) - v;
  for (const auto& [k, v] : pf) out.per_sense[k] = v - Mass(pr, k);
  if (out.per_sense.empty()) return out;
  out.score = -std::numeric_limits<double>::infinity();
  for (const auto& [k, d] : out.per_sense) out.score = std::max(out.score, d);
  return out;
}

ChangeResult ScoreProfile(const SenseProfile& profile, std::string word,
                          std::int64_t pooled_freq, double threshold,
                          JsdMode mode) {
  ChangeResult r;
  r.word = std::move(word);
  r.missing = profile.missing;
  r.pooled_freq = pooled_freq;
  r.jsd = JensenShannon(profile, mode);
  if (r.jsd) r.changed = Classify(*r.jsd, threshold);
  if (!profile.missing) r.novelty = NoveltyDiff(profile).score;
  return r;
}

std::vector<ChangeResult> RankWords(std::vector<ChangeResult> results,
                                    RankKey key, std::size_t n) {
  auto score = [key](const ChangeResult& r) -> std::optional<double> {
    if (key == RankKey::kJsd) return r.jsd;
    if (r.missing) return std::nullopt;
    return r.novelty;
  };
  std::stable_sort(results.begin(), results.end(),
                   [&](const ChangeResult& a, const ChangeResult& b) {
                     auto sa = score(a);
                     auto sb = score(b);
                     if (sa.has_value() != sb.has_value()) return sa.has_value();
                     if (sa && *sa != *sb) return *sa > *sb;
                     if (a.pooled_freq != b.pooled_freq) {
                       return a.pooled_freq > b.pooled_freq;
                     }
                     return a.word < b.word;
                   });
  if (n > 0 && results.size() > n) results.resize(n);
  return results;
}

}  // namespace senseshift
