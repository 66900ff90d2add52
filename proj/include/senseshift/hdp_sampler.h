#ifndef SENSESHIFT_HDP_SAMPLER_H_
#define SENSESHIFT_HDP_SAMPLER_H_

// Chinese restaurant franchise Gibbs sampler for a two-level hierarchical
// Dirichlet process. Documents are restaurants, word tokens are customers,
// tables are per-document clusters and dishes are corpus-wide topics
// (induced senses). Topics are multinomials with a symmetric Dirichlet(beta)
// base measure integrated out, so every conditional density is the
// closed-form collapsed predictive
//
//   f_k(w) = (mass_k(w) + beta) / (total_mass_k + beta * V),
//
// and the prior density of a word under an unseen topic is 1 / V.

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "senseshift/cooccurrence.h"
#include "senseshift/corpus.h"
#include "senseshift/sense_profile.h"

namespace senseshift {

enum class WeightingMode : std::uint8_t {
  kCount,  // every seated token adds mass 1
  kPpmi,   // a token adds 1 + its mean PPMI with the rest of its document
};

std::string_view WeightingModeName(WeightingMode mode);
WeightingMode ParseWeightingMode(std::string_view name);

struct Hyperparams {
  double alpha = 1.0;   // document-level concentration
  double gamma = 1.0;   // corpus-level concentration
  double beta = 0.01;   // topic-word Dirichlet smoothing
  int iterations = 1;
  std::uint64_t seed = 42;
  WeightingMode weighting = WeightingMode::kCount;

  // Throws ConfigError unless alpha, gamma, beta > 0 and iterations >= 1.
  void Validate() const;
};

// Deterministic uniform stream: one 64-bit Mersenne Twister output per
// variate, mapped to [0, 1) with 53 bits. Platform independent.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

// Collapsed predictive density of one word under a topic.
double CollapsedDensity(double word_mass, double total_mass, double beta,
                        std::size_t vocab_size);

// Normalizes non-negative weights to sum to one. Throws InvariantViolation
// if all weights are zero, any weight is negative or non-finite, or the
// normalized sum is off by more than 1e-12.
std::vector<double> NormalizeWeights(std::vector<double> weights);

// Same contract for log-space weights (max-shifted before exponentiating).
std::vector<double> NormalizeLogWeights(const std::vector<double>& log_weights);

// Inverse-CDF draw from normalized probabilities with a single uniform u.
std::size_t DrawIndex(std::span<const double> probs, double u);

// Existing table t has weight table_sizes[t] * densities[t]; a new table
// has weight alpha * new_table_likelihood. The last entry is the new table.
std::vector<double> TableProbabilities(std::span<const double> table_sizes,
                                       std::span<const double> densities,
                                       double alpha,
                                       double new_table_likelihood);

// Existing topic k has weight table_counts[k] * densities[k]; a new topic
// has weight gamma * prior_density. The last entry is the new topic.
std::vector<double> TopicProbabilities(std::span<const double> table_counts,
                                       std::span<const double> densities,
                                       double gamma, double prior_density);

struct TableRecord {
  int count = 0;    // n_jt; zero marks a free slot
  int topic = -1;   // k_jt
  bool live() const { return count > 0; }
};

struct TopicRecord {
  int tables = 0;   // m_k; zero marks a free slot
  std::unordered_map<WordId, double> word_mass;
  double total_mass = 0.0;
  bool live() const { return tables > 0; }
};

// Candidate options paired with their normalized probabilities.
struct ChoiceDistribution {
  std::vector<int> options;  // slot index or HdpSampler::kNew
  std::vector<double> probs;
};

class HdpSampler {
 public:
  static constexpr int kNew = -1;

  // Seats every token with the document-level CRP, then draws a topic for
  // every table with the corpus-level CRP. `ppmi` is required in PPMI mode
  // and ignored otherwise. Throws ConfigError on an empty document list.
  static HdpSampler Initialize(std::vector<PseudoDocument> docs,
                               std::size_t vocab_size, const Hyperparams& hp,
                               const PpmiMatrix* ppmi = nullptr);

  // Builds a state from an explicit partition: table_of[j][i] is the table
  // slot of token i in document j and topic_of[j][t] the topic slot of
  // table t. Slots that receive no tokens stay free.
  static HdpSampler FromPartition(std::vector<PseudoDocument> docs,
                                  std::size_t vocab_size, const Hyperparams& hp,
                                  const std::vector<std::vector<int>>& table_of,
                                  const std::vector<std::vector<int>>& topic_of,
                                  const PpmiMatrix* ppmi = nullptr);

  // f_k^{-x}(w) for a live topic, 1/V for kNew. Reads current counts, so
  // the caller removes the token's own contribution first.
  double CondDensityWord(int topic, WordId w) const;

  // Mixture over live topics plus the unseen-topic prior.
  double LikelihoodNewTable(WordId w) const;

  // Conditional over tables of document j for the (unseated) token at i.
  ChoiceDistribution TableDistribution(std::size_t j, std::size_t i) const;
  // Conditional over topics for a fresh table holding only word w.
  ChoiceDistribution NewTableTopicDistribution(WordId w) const;
  // Conditional over topics for table t of document j, whose own mass and
  // table count have already been withdrawn (see WithdrawTable).
  ChoiceDistribution TableTopicDistribution(std::size_t j, int t) const;

  int SampleTable(std::size_t j, std::size_t i);
  int SampleTopicForNewTable(WordId w);
  // Withdraws table t, samples its topic and reseats it. Returns the topic.
  int ResampleTableTopic(std::size_t j, int t);

  // Removes the token's mass and table membership, deleting its table and
  // topic when they empty.
  void UnseatWord(std::size_t j, std::size_t i);
  // Seats the token at an existing live table (or a just-created one).
  void SeatWord(std::size_t j, std::size_t i, int table);
  int CreateTopic();
  int CreateTable(std::size_t j, int topic);
  // Detaches table t from its topic (mass and m_k). Deletes the topic if
  // no other table serves it.
  void WithdrawTable(std::size_t j, int t);
  void AttachTable(std::size_t j, int t, int topic);

  // One pass: every token in document order, then every live table.
  void Sweep();
  void Run(int iterations);
  void Run() { Run(hp_.iterations); }

  // Recomputes every counter from the assignments and throws
  // InvariantViolation naming the first mismatch.
  void Audit() const;

  // Per target, the empirical topic distribution of its occurrences in each
  // corpus. Ids outside the vocabulary come back marked missing.
  std::vector<SenseProfile> ExtractSenseDistributions(
      std::span<const WordId> targets) const;

  // Up to n (word, mass) pairs of a live topic, heaviest first.
  std::vector<std::pair<WordId, double>> TopWords(int topic,
                                                  std::size_t n) const;

  // "doc<TAB>pos<TAB>table<TAB>topic" per token.
  void WriteSnapshot(const std::filesystem::path& path) const;

  std::size_t num_docs() const { return docs_.size(); }
  const PseudoDocument& doc(std::size_t j) const { return docs_[j]; }
  std::size_t vocab_size() const { return vocab_size_; }
  const Hyperparams& hyperparams() const { return hp_; }
  int table_of(std::size_t j, std::size_t i) const { return assignment_[j][i]; }
  const std::vector<TableRecord>& tables(std::size_t j) const {
    return tables_[j];
  }
  const std::vector<TopicRecord>& topics() const { return topics_; }
  std::vector<int> LiveTopics() const;
  int num_live_topics() const { return live_topics_; }
  int total_tables() const { return total_tables_; }
  double token_weight(std::size_t j, std::size_t i) const {
    return weight_[j][i];
  }

 private:
  HdpSampler(std::vector<PseudoDocument> docs, std::size_t vocab_size,
             const Hyperparams& hp, const PpmiMatrix* ppmi);

  void AddMass(int topic, WordId w, double weight);
  void RemoveMass(int topic, WordId w, double weight);
  void DeleteTopic(int topic);
  void InitPartition();

  std::vector<PseudoDocument> docs_;
  std::size_t vocab_size_;
  Hyperparams hp_;
  Rng rng_;

  std::vector<std::vector<double>> weight_;  // per token mass contribution
  std::vector<std::vector<int>> assignment_;  // t_ji
  std::vector<std::vector<TableRecord>> tables_;
  std::vector<std::vector<int>> free_tables_;
  std::vector<TopicRecord> topics_;
  std::vector<int> free_topics_;
  int live_topics_ = 0;
  int total_tables_ = 0;  // m_..
};

}  // namespace senseshift

#endif  // SENSESHIFT_HDP_SAMPLER_H_
