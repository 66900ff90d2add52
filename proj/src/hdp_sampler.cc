#include "senseshift/hdp_sampler.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <utility>

#include "senseshift/errors.h"

namespace senseshift {

namespace {

constexpr double kNormTolerance = 1e-12;
constexpr double kPpmiAuditTolerance = 1e-9;

// Token weights are >= 1, so any residue below this is float drift.
constexpr double kMassEpsilon = 0.5;

std::vector<double> TokenWeights(const PseudoDocument& doc, WeightingMode mode,
                                 const PpmiMatrix* ppmi) {
  const std::size_t n = doc.tokens.size();
  std::vector<double> w(n, 1.0);
  if (mode != WeightingMode::kPpmi || n < 2) return w;
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k != i) sum += ppmi->Weight(doc.tokens[i], doc.tokens[k]);
    }
    w[i] = 1.0 + sum / static_cast<double>(n - 1);
  }
  return w;
}

std::string Where(std::size_t j, int t) {
  return "document " + std::to_string(j) + " table " + std::to_string(t);
}

}  // namespace

std::string_view WeightingModeName(WeightingMode mode) {
  return mode == WeightingMode::kCount ? "count" : "ppmi";
}

WeightingMode ParseWeightingMode(std::string_view name) {
  std::string lower = AsciiLower(name);
  if (lower == "count") return WeightingMode::kCount;
  if (lower == "ppmi") return WeightingMode::kPpmi;
  throw ConfigError("unknown weighting mode: " + std::string(name));
}

void Hyperparams::Validate() const {
  if (!(alpha > 0.0)) throw ConfigError("alpha must be > 0");
  if (!(gamma > 0.0)) throw ConfigError("gamma must be > 0");
  if (!(beta > 0.0)) throw ConfigError("beta must be > 0");
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
}

double CollapsedDensity(double word_mass, double total_mass, double beta,
                        std::size_t vocab_size) {
  const double v = static_cast<double>(vocab_size);
  return (word_mass + beta) / (total_mass + beta * v);
}

std::vector<double> NormalizeWeights(std::vector<double> weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw InvariantViolation("sampling weight is negative or not finite");
    }
    sum += w;
  }
  if (!(sum > 0.0)) throw InvariantViolation("all sampling weights are zero");
  double check = 0.0;
  for (double& w : weights) {
    w /= sum;
    check += w;
  }
  if (std::abs(check - 1.0) > kNormTolerance) {
    throw InvariantViolation("sampling distribution not normalized");
  }
  return weights;
}

std::vector<double> NormalizeLogWeights(const std::vector<double>& log_weights) {
  double max = -std::numeric_limits<double>::infinity();
  for (double lw : log_weights) max = std::max(max, lw);
  if (!std::isfinite(max)) {
    throw InvariantViolation("all log sampling weights are -inf");
  }
  std::vector<double> w(log_weights.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = std::exp(log_weights[i] - max);
  }
  return NormalizeWeights(std::move(w));
}

std::size_t DrawIndex(std::span<const double> probs, double u) {
  double cum = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    last_positive = i;
    cum += probs[i];
    if (u < cum) return i;
  }
  // u landed in the rounding gap above the final cumulative sum.
  return last_positive;
}

std::vector<double> TableProbabilities(std::span<const double> table_sizes,
                                       std::span<const double> densities,
                                       double alpha,
                                       double new_table_likelihood) {
  std::vector<double> w(table_sizes.size() + 1);
  for (std::size_t t = 0; t < table_sizes.size(); ++t) {
    w[t] = table_sizes[t] * densities[t];
  }
  w.back() = alpha * new_table_likelihood;
  return NormalizeWeights(std::move(w));
}

std::vector<double> TopicProbabilities(std::span<const double> table_counts,
                                       std::span<const double> densities,
                                       double gamma, double prior_density) {
  std::vector<double> w(table_counts.size() + 1);
  for (std::size_t k = 0; k < table_counts.size(); ++k) {
    w[k] = table_counts[k] * densities[k];
  }
  w.back() = gamma * prior_density;
  return NormalizeWeights(std::move(w));
}

HdpSampler::HdpSampler(std::vector<PseudoDocument> docs,
                       std::size_t vocab_size, const Hyperparams& hp,
                       const PpmiMatrix* ppmi)
    : docs_(std::move(docs)), vocab_size_(vocab_size), hp_(hp), rng_(hp.seed) {
  hp_.Validate();
  if (docs_.empty()) throw ConfigError("sampler needs at least one document");
  if (vocab_size_ == 0) throw ConfigError("sampler needs a non-empty vocabulary");
  if (hp_.weighting == WeightingMode::kPpmi && ppmi == nullptr) {
    throw ConfigError("PPMI weighting requires a PPMI matrix");
  }
  const std::size_t n = docs_.size();
  weight_.resize(n);
  assignment_.resize(n);
  tables_.resize(n);
  free_tables_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const PseudoDocument& d = docs_[j];
    if (d.tokens.empty()) {
      throw InvariantViolation("document " + std::to_string(j) + " is empty");
    }
    for (WordId w : d.tokens) {
      if (w < 0 || static_cast<std::size_t>(w) >= vocab_size_) {
        throw InvariantViolation("word id " + std::to_string(w) +
                                 " outside vocabulary in document " +
                                 std::to_string(j));
      }
    }
    weight_[j] = TokenWeights(d, hp_.weighting, ppmi);
    assignment_[j].assign(d.tokens.size(), kNew);
  }
}

HdpSampler HdpSampler::Initialize(std::vector<PseudoDocument> docs,
                                  std::size_t vocab_size, const Hyperparams& hp,
                                  const PpmiMatrix* ppmi) {
  HdpSampler s(std::move(docs), vocab_size, hp, ppmi);
  s.InitPartition();
  return s;
}

HdpSampler HdpSampler::FromPartition(
    std::vector<PseudoDocument> docs, std::size_t vocab_size,
    const Hyperparams& hp, const std::vector<std::vector<int>>& table_of,
    const std::vector<std::vector<int>>& topic_of, const PpmiMatrix* ppmi) {
  HdpSampler s(std::move(docs), vocab_size, hp, ppmi);
  if (table_of.size() != s.docs_.size() || topic_of.size() != s.docs_.size()) {
    throw ConfigError("partition does not match document count");
  }
  int max_topic = -1;
  for (const auto& row : topic_of) {
    for (int k : row) max_topic = std::max(max_topic, k);
  }
  s.topics_.resize(static_cast<std::size_t>(max_topic + 1));
  for (std::size_t j = 0; j < s.docs_.size(); ++j) {
    if (table_of[j].size() != s.docs_[j].tokens.size()) {
      throw ConfigError("partition does not match length of document " +
                        std::to_string(j));
    }
    s.tables_[j].resize(topic_of[j].size());
    for (std::size_t i = 0; i < table_of[j].size(); ++i) {
      int t = table_of[j][i];
      if (t < 0 || static_cast<std::size_t>(t) >= topic_of[j].size() ||
          topic_of[j][t] < 0) {
        throw ConfigError("token " + std::to_string(i) + " of document " +
                          std::to_string(j) + " has no valid table/topic");
      }
      s.assignment_[j][i] = t;
      ++s.tables_[j][t].count;
    }
    for (std::size_t t = 0; t < s.tables_[j].size(); ++t) {
      TableRecord& rec = s.tables_[j][t];
      if (!rec.live()) {
        s.free_tables_[j].push_back(static_cast<int>(t));
        continue;
      }
      rec.topic = topic_of[j][t];
      ++s.topics_[rec.topic].tables;
      ++s.total_tables_;
    }
    for (std::size_t i = 0; i < table_of[j].size(); ++i) {
      int k = s.tables_[j][table_of[j][i]].topic;
      s.AddMass(k, s.docs_[j].tokens[i], s.weight_[j][i]);
    }
  }
  for (std::size_t k = s.topics_.size(); k-- > 0;) {
    if (s.topics_[k].live()) {
      ++s.live_topics_;
    } else {
      s.free_topics_.push_back(static_cast<int>(k));
    }
  }
  return s;
}

void HdpSampler::InitPartition() {
  // Document-level CRP: seat tokens sequentially.
  for (std::size_t j = 0; j < docs_.size(); ++j) {
    std::vector<TableRecord>& tables = tables_[j];
    for (std::size_t i = 0; i < docs_[j].tokens.size(); ++i) {
      std::vector<double> w(tables.size() + 1);
      for (std::size_t t = 0; t < tables.size(); ++t) {
        w[t] = static_cast<double>(tables[t].count);
      }
      w.back() = hp_.alpha;
      std::size_t pick = DrawIndex(NormalizeWeights(std::move(w)), rng_.Uniform());
      if (pick == tables.size()) {
        tables.push_back(TableRecord{0, -1});
      }
      ++tables[pick].count;
      assignment_[j][i] = static_cast<int>(pick);
    }
  }
  // Corpus-level CRP: every table draws a topic in (document, table) order.
  for (std::size_t j = 0; j < docs_.size(); ++j) {
    for (std::size_t t = 0; t < tables_[j].size(); ++t) {
      std::vector<double> w(topics_.size() + 1);
      for (std::size_t k = 0; k < topics_.size(); ++k) {
        w[k] = static_cast<double>(topics_[k].tables);
      }
      w.back() = hp_.gamma;
      std::size_t pick = DrawIndex(NormalizeWeights(std::move(w)), rng_.Uniform());
      int k = pick == topics_.size() ? CreateTopic() : static_cast<int>(pick);
      tables_[j][t].topic = k;
      ++topics_[k].tables;
      ++total_tables_;
    }
    for (std::size_t i = 0; i < docs_[j].tokens.size(); ++i) {
      AddMass(tables_[j][assignment_[j][i]].topic, docs_[j].tokens[i],
              weight_[j][i]);
    }
  }
}

void HdpSampler::AddMass(int topic, WordId w, double weight) {
  TopicRecord& rec = topics_[topic];
  rec.word_mass[w] += weight;
  rec.total_mass += weight;
}

void HdpSampler::RemoveMass(int topic, WordId w, double weight) {
  TopicRecord& rec = topics_[topic];
  auto it = rec.word_mass.find(w);
  if (it == rec.word_mass.end()) {
    throw InvariantViolation("topic " + std::to_string(topic) +
                             " has no mass for word " + std::to_string(w));
  }
  it->second -= weight;
  if (it->second < kMassEpsilon) rec.word_mass.erase(it);
  rec.total_mass -= weight;
  if (rec.word_mass.empty()) rec.total_mass = 0.0;
}

int HdpSampler::CreateTopic() {
  int k;
  if (!free_topics_.empty()) {
    k = free_topics_.back();
    free_topics_.pop_back();
  } else {
    k = static_cast<int>(topics_.size());
    topics_.emplace_back();
  }
  // Marked live by the table that claims it.
  ++live_topics_;
  return k;
}

void HdpSampler::DeleteTopic(int topic) {
  TopicRecord& rec = topics_[topic];
  rec.tables = 0;
  rec.word_mass.clear();
  rec.total_mass = 0.0;
  free_topics_.push_back(topic);
  --live_topics_;
}

int HdpSampler::CreateTable(std::size_t j, int topic) {
  int t;
  if (!free_tables_[j].empty()) {
    t = free_tables_[j].back();
    free_tables_[j].pop_back();
  } else {
    t = static_cast<int>(tables_[j].size());
    tables_[j].emplace_back();
  }
  tables_[j][t] = TableRecord{0, topic};
  ++topics_[topic].tables;
  ++total_tables_;
  return t;
}

void HdpSampler::UnseatWord(std::size_t j, std::size_t i) {
  const int t = assignment_[j][i];
  if (t == kNew) throw InvariantViolation("token already unseated");
  TableRecord& table = tables_[j][t];
  const int k = table.topic;
  RemoveMass(k, docs_[j].tokens[i], weight_[j][i]);
  assignment_[j][i] = kNew;
  if (--table.count == 0) {
    table.topic = -1;
    free_tables_[j].push_back(t);
    --total_tables_;
    if (--topics_[k].tables == 0) DeleteTopic(k);
  }
}

void HdpSampler::SeatWord(std::size_t j, std::size_t i, int table) {
  TableRecord& rec = tables_[j][table];
  if (rec.topic < 0) throw InvariantViolation("seating at " + Where(j, table) +
                                              " which has no topic");
  ++rec.count;
  assignment_[j][i] = table;
  AddMass(rec.topic, docs_[j].tokens[i], weight_[j][i]);
}

void HdpSampler::WithdrawTable(std::size_t j, int t) {
  TableRecord& table = tables_[j][t];
  const int k = table.topic;
  for (std::size_t i = 0; i < docs_[j].tokens.size(); ++i) {
    if (assignment_[j][i] == t) RemoveMass(k, docs_[j].tokens[i], weight_[j][i]);
  }
  table.topic = -1;
  --total_tables_;
  if (--topics_[k].tables == 0) DeleteTopic(k);
}

void HdpSampler::AttachTable(std::size_t j, int t, int topic) {
  TableRecord& table = tables_[j][t];
  table.topic = topic;
  ++topics_[topic].tables;
  ++total_tables_;
  for (std::size_t i = 0; i < docs_[j].tokens.size(); ++i) {
    if (assignment_[j][i] == t) AddMass(topic, docs_[j].tokens[i], weight_[j][i]);
  }
}

double HdpSampler::CondDensityWord(int topic, WordId w) const {
  if (topic == kNew) return 1.0 / static_cast<double>(vocab_size_);
  const TopicRecord& rec = topics_[topic];
  auto it = rec.word_mass.find(w);
  const double mass = it == rec.word_mass.end() ? 0.0 : it->second;
  return CollapsedDensity(mass, rec.total_mass, hp_.beta, vocab_size_);
}

double HdpSampler::LikelihoodNewTable(WordId w) const {
  const double denom = static_cast<double>(total_tables_) + hp_.gamma;
  double sum = 0.0;
  for (std::size_t k = 0; k < topics_.size(); ++k) {
    if (!topics_[k].live()) continue;
    sum += static_cast<double>(topics_[k].tables) / denom *
           CondDensityWord(static_cast<int>(k), w);
  }
  return sum + hp_.gamma / denom * CondDensityWord(kNew, w);
}

ChoiceDistribution HdpSampler::TableDistribution(std::size_t j,
                                                 std::size_t i) const {
  const WordId w = docs_[j].tokens[i];
  ChoiceDistribution out;
  std::vector<double> sizes, densities;
  for (std::size_t t = 0; t < tables_[j].size(); ++t) {
    const TableRecord& rec = tables_[j][t];
    if (!rec.live()) continue;
    out.options.push_back(static_cast<int>(t));
    sizes.push_back(static_cast<double>(rec.count));
    densities.push_back(CondDensityWord(rec.topic, w));
  }
  out.options.push_back(kNew);
  out.probs = TableProbabilities(sizes, densities, hp_.alpha,
                                 LikelihoodNewTable(w));
  return out;
}

ChoiceDistribution HdpSampler::NewTableTopicDistribution(WordId w) const {
  ChoiceDistribution out;
  std::vector<double> counts, densities;
  for (std::size_t k = 0; k < topics_.size(); ++k) {
    if (!topics_[k].live()) continue;
    out.options.push_back(static_cast<int>(k));
    counts.push_back(static_cast<double>(topics_[k].tables));
    densities.push_back(CondDensityWord(static_cast<int>(k), w));
  }
  out.options.push_back(kNew);
  out.probs = TopicProbabilities(counts, densities, hp_.gamma,
                                 CondDensityWord(kNew, w));
  return out;
}

ChoiceDistribution HdpSampler::TableTopicDistribution(std::size_t j,
                                                      int t) const {
  std::vector<std::pair<WordId, double>> items;
  for (std::size_t i = 0; i < docs_[j].tokens.size(); ++i) {
    if (assignment_[j][i] == t) items.emplace_back(docs_[j].tokens[i], weight_[j][i]);
  }
  const double beta = hp_.beta;
  const double beta_v = beta * static_cast<double>(vocab_size_);

  // log f_k^{-x_jt}(x_jt) by the predictive chain rule over the table's items.
  auto log_table_density = [&](const TopicRecord* rec) {
    std::unordered_map<WordId, double> added;
    double added_total = 0.0;
    double log_f = 0.0;
    for (const auto& [w, weight] : items) {
      double mass = added[w];
      if (rec != nullptr) {
        auto it = rec->word_mass.find(w);
        if (it != rec->word_mass.end()) mass += it->second;
      }
      const double total = (rec != nullptr ? rec->total_mass : 0.0) + added_total;
      log_f += std::log((mass + beta) / (total + beta_v));
      added[w] += weight;
      added_total += weight;
    }
    return log_f;
  };

  ChoiceDistribution out;
  std::vector<double> log_w;
  for (std::size_t k = 0; k < topics_.size(); ++k) {
    const TopicRecord& rec = topics_[k];
    if (!rec.live()) continue;
    out.options.push_back(static_cast<int>(k));
    log_w.push_back(std::log(static_cast<double>(rec.tables)) +
                    log_table_density(&rec));
  }
  out.options.push_back(kNew);
  log_w.push_back(std::log(hp_.gamma) + log_table_density(nullptr));
  out.probs = NormalizeLogWeights(log_w);
  return out;
}

int HdpSampler::SampleTable(std::size_t j, std::size_t i) {
  ChoiceDistribution d = TableDistribution(j, i);
  return d.options[DrawIndex(d.probs, rng_.Uniform())];
}

int HdpSampler::SampleTopicForNewTable(WordId w) {
  ChoiceDistribution d = NewTableTopicDistribution(w);
  return d.options[DrawIndex(d.probs, rng_.Uniform())];
}

int HdpSampler::ResampleTableTopic(std::size_t j, int t) {
  WithdrawTable(j, t);
  ChoiceDistribution d = TableTopicDistribution(j, t);
  int k = d.options[DrawIndex(d.probs, rng_.Uniform())];
  if (k == kNew) k = CreateTopic();
  AttachTable(j, t, k);
  return k;
}

void HdpSampler::Sweep() {
  for (std::size_t j = 0; j < docs_.size(); ++j) {
    for (std::size_t i = 0; i < docs_[j].tokens.size(); ++i) {
      UnseatWord(j, i);
      int t = SampleTable(j, i);
      if (t == kNew) {
        int k = SampleTopicForNewTable(docs_[j].tokens[i]);
        if (k == kNew) k = CreateTopic();
        t = CreateTable(j, k);
      }
      SeatWord(j, i, t);
    }
  }
  for (std::size_t j = 0; j < docs_.size(); ++j) {
    for (std::size_t t = 0; t < tables_[j].size(); ++t) {
      if (tables_[j][t].live()) ResampleTableTopic(j, static_cast<int>(t));
    }
  }
}

void HdpSampler::Run(int iterations) {
  for (int it = 0; it < iterations; ++it) Sweep();
}

void HdpSampler::Audit() const {
  const bool exact = hp_.weighting == WeightingMode::kCount;
  auto mismatch = [](const std::string& what, double stored, double actual) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "audit failed: " << what << " stored=" << stored
        << " recomputed=" << actual;
    throw InvariantViolation(msg.str());
  };

  std::vector<int> m(topics_.size(), 0);
  std::vector<std::unordered_map<WordId, double>> mass(topics_.size());
  std::vector<double> total(topics_.size(), 0.0);
  int table_sum = 0;
  for (std::size_t j = 0; j < docs_.size(); ++j) {
    std::vector<int> n(tables_[j].size(), 0);
    for (std::size_t i = 0; i < docs_[j].tokens.size(); ++i) {
      const int t = assignment_[j][i];
      if (t < 0 || static_cast<std::size_t>(t) >= n.size()) {
        mismatch("t_ji of document " + std::to_string(j) + " token " +
                     std::to_string(i),
                 t, -1);
      }
      ++n[t];
    }
    int doc_sum = 0;
    std::size_t free_slots = 0;
    for (std::size_t t = 0; t < n.size(); ++t) {
      const TableRecord& rec = tables_[j][t];
      if (rec.count != n[t]) mismatch("n_jt of " + Where(j, static_cast<int>(t)), rec.count, n[t]);
      doc_sum += n[t];
      if (n[t] == 0) {
        ++free_slots;
        if (rec.topic != -1) mismatch("topic of empty " + Where(j, static_cast<int>(t)), rec.topic, -1);
        continue;
      }
      if (rec.topic < 0 || static_cast<std::size_t>(rec.topic) >= topics_.size() ||
          !topics_[rec.topic].live()) {
        mismatch("k_jt of " + Where(j, static_cast<int>(t)) + " (dead topic)", rec.topic, -1);
      }
      ++m[rec.topic];
      ++table_sum;
    }
    if (free_slots != free_tables_[j].size()) {
      mismatch("free table slots of document " + std::to_string(j),
               static_cast<double>(free_tables_[j].size()),
               static_cast<double>(free_slots));
    }
    if (doc_sum != static_cast<int>(docs_[j].tokens.size())) {
      mismatch("sum_t n_jt of document " + std::to_string(j), doc_sum,
               static_cast<double>(docs_[j].tokens.size()));
    }
    for (std::size_t i = 0; i < docs_[j].tokens.size(); ++i) {
      const int k = tables_[j][assignment_[j][i]].topic;
      mass[k][docs_[j].tokens[i]] += weight_[j][i];
      total[k] += weight_[j][i];
    }
  }
  if (table_sum != total_tables_) mismatch("m_..", total_tables_, table_sum);

  int live = 0;
  std::size_t free_slots = 0;
  for (std::size_t k = 0; k < topics_.size(); ++k) {
    const TopicRecord& rec = topics_[k];
    const std::string name = "topic " + std::to_string(k);
    if (rec.tables != m[k]) mismatch("m_k of " + name, rec.tables, m[k]);
    if (m[k] == 0) {
      ++free_slots;
      if (!rec.word_mass.empty() || rec.total_mass != 0.0) {
        mismatch("mass of dead " + name, rec.total_mass, 0.0);
      }
      continue;
    }
    ++live;
    auto close = [&](double a, double b) {
      return exact ? a == b : std::abs(a - b) <= kPpmiAuditTolerance;
    };
    if (!close(rec.total_mass, total[k])) {
      mismatch("total mass of " + name, rec.total_mass, total[k]);
    }
    if (rec.word_mass.size() != mass[k].size()) {
      mismatch("word support size of " + name,
               static_cast<double>(rec.word_mass.size()),
               static_cast<double>(mass[k].size()));
    }
    for (const auto& [w, v] : mass[k]) {
      auto it = rec.word_mass.find(w);
      double stored = it == rec.word_mass.end() ? 0.0 : it->second;
      if (!close(stored, v)) {
        mismatch("mass of word " + std::to_string(w) + " in " + name, stored, v);
      }
    }
  }
  if (live != live_topics_) mismatch("live topic count", live_topics_, live);
  if (free_slots != free_topics_.size()) {
    mismatch("free topic slots", static_cast<double>(free_topics_.size()),
             static_cast<double>(free_slots));
  }
}

std::vector<SenseProfile> HdpSampler::ExtractSenseDistributions(
    std::span<const WordId> targets) const {
  std::vector<SenseProfile> out(targets.size());
  std::vector<int> slot(vocab_size_, -1);
  for (std::size_t s = 0; s < targets.size(); ++s) {
    out[s].word = targets[s];
    const WordId w = targets[s];
    if (w < 0 || static_cast<std::size_t>(w) >= vocab_size_) {
      out[s].missing = true;
      continue;
    }
    if (slot[w] < 0) slot[w] = static_cast<int>(s);
  }

  // counts[target][label][topic]
  std::vector<std::array<std::map<int, std::int64_t>, kNumLabels>> counts(
      targets.size());
  for (std::size_t j = 0; j < docs_.size(); ++j) {
    const int label = LabelIndex(docs_[j].label);
    for (std::size_t i = 0; i < docs_[j].tokens.size(); ++i) {
      const int s = slot[docs_[j].tokens[i]];
      if (s < 0) continue;
      ++counts[s][label][tables_[j][assignment_[j][i]].topic];
    }
  }

  for (std::size_t s = 0; s < targets.size(); ++s) {
    if (out[s].missing) continue;
    // Duplicate targets share the first slot's tallies.
    const auto& c = counts[slot[targets[s]]];
    for (int label = 0; label < kNumLabels; ++label) {
      std::int64_t n = 0;
      for (const auto& [k, v] : c[label]) n += v;
      std::optional<SenseDistribution> dist;
      if (n > 0) {
        dist.emplace();
        for (const auto& [k, v] : c[label]) {
          (*dist)[k] = static_cast<double>(v) / static_cast<double>(n);
        }
      }
      if (label == LabelIndex(CorpusLabel::kReference)) {
        out[s].n_ref = n;
        out[s].p_ref = std::move(dist);
      } else {
        out[s].n_focus = n;
        out[s].p_focus = std::move(dist);
      }
    }
  }
  return out;
}

std::vector<std::pair<WordId, double>> HdpSampler::TopWords(
    int topic, std::size_t n) const {
  const TopicRecord& rec = topics_.at(topic);
  std::vector<std::pair<WordId, double>> words(rec.word_mass.begin(),
                                               rec.word_mass.end());
  std::sort(words.begin(), words.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (words.size() > n) words.resize(n);
  return words;
}

std::vector<int> HdpSampler::LiveTopics() const {
  std::vector<int> live;
  for (std::size_t k = 0; k < topics_.size(); ++k) {
    if (topics_[k].live()) live.push_back(static_cast<int>(k));
  }
  return live;
}

void HdpSampler::WriteSnapshot(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  for (std::size_t j = 0; j < docs_.size(); ++j) {
    for (std::size_t i = 0; i < docs_[j].tokens.size(); ++i) {
      const int t = assignment_[j][i];
      out << j << '\t' << i << '\t' << t << '\t' << tables_[j][t].topic << '\n';
    }
  }
}

}  // namespace senseshift
