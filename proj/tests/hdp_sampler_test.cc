#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "senseshift/errors.h"
#include "senseshift/hdp_sampler.h"
#include "support/crf_enumeration.h"
#include "support/oracles.h"

using namespace senseshift;
using senseshift::testing::Canonicalize;
using senseshift::testing::CrfKey;
using senseshift::testing::ExactCrfPosterior;

namespace {

PseudoDocument Doc(std::vector<WordId> tokens,
                   CorpusLabel label = CorpusLabel::kReference) {
  PseudoDocument d;
  d.label = label;
  d.tokens = std::move(tokens);
  return d;
}

Hyperparams Params(double alpha, double gamma, double beta,
                   std::uint64_t seed = 1) {
  Hyperparams hp;
  hp.alpha = alpha;
  hp.gamma = gamma;
  hp.beta = beta;
  hp.seed = seed;
  return hp;
}

double Sum(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

std::string Snapshot(const HdpSampler& s) {
  std::ostringstream os;
  for (std::size_t j = 0; j < s.num_docs(); ++j) {
    for (std::size_t i = 0; i < s.doc(j).tokens.size(); ++i) {
      const int t = s.table_of(j, i);
      os << j << ' ' << i << ' ' << t << ' ' << s.tables(j)[t].topic << '\n';
    }
  }
  return os.str();
}

double TotalVariation(const std::map<CrfKey, double>& exact,
                      const std::map<CrfKey, double>& empirical) {
  double tv = 0.0;
  for (const auto& [k, p] : exact) {
    auto it = empirical.find(k);
    tv += std::abs(p - (it == empirical.end() ? 0.0 : it->second));
  }
  for (const auto& [k, q] : empirical) {
    if (exact.count(k) == 0) tv += q;
  }
  return 0.5 * tv;
}

double ChainTotalVariation(const std::vector<PseudoDocument>& docs, std::size_t vocab,
                           const Hyperparams& hp, int burn_in, int retained) {
  std::vector<std::vector<WordId>> raw;
  for (const auto& d : docs) raw.push_back(d.tokens);
  auto exact = ExactCrfPosterior(raw, vocab, hp.alpha, hp.gamma, hp.beta);
  HdpSampler s = HdpSampler::Initialize(docs, vocab, hp);
  s.Run(burn_in);
  std::map<CrfKey, double> freq;
  for (int it = 0; it < retained; ++it) {
    s.Sweep();
    freq[Canonicalize(s)] += 1.0 / retained;
  }
  return TotalVariation(exact, freq);
}

}  // namespace

TEST_CASE("hyperparameter validation") {
  CHECK_NOTHROW(Params(1, 1, 0.01).Validate());
  CHECK_THROWS_AS(Params(0, 1, 0.01).Validate(), ConfigError);
  CHECK_THROWS_AS(Params(1, -1, 0.01).Validate(), ConfigError);
  CHECK_THROWS_AS(Params(1, 1, 0).Validate(), ConfigError);
  Hyperparams hp = Params(1, 1, 0.01);
  hp.iterations = 0;
  CHECK_THROWS_AS(hp.Validate(), ConfigError);
  CHECK(ParseWeightingMode("PPMI") == WeightingMode::kPpmi);
  CHECK_THROWS_AS(ParseWeightingMode("tfidf"), ConfigError);
}

TEST_CASE("init_partition rejects an empty corpus") {
  CHECK_THROWS_AS(HdpSampler::Initialize({}, 3, Params(1, 1, 0.1)), ConfigError);
}

TEST_CASE("init_partition opens a table for each document's first word") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    HdpSampler s = HdpSampler::Initialize(
        {Doc({0, 1, 2}), Doc({2, 2}), Doc({1})}, 3, Params(1, 1, 0.1, seed));
    for (std::size_t j = 0; j < s.num_docs(); ++j) CHECK(s.table_of(j, 0) == 0);
    // The first table in the corpus always founds topic 0.
    CHECK(s.tables(0)[0].topic == 0);
    CHECK_NOTHROW(s.Audit());
  }
}

TEST_CASE("init_partition seats three words at one table with probability 1/3") {
  // Sequential CRP with alpha = 1: (1/1) * (1/2) * (2/3) = 1/3.
  const int runs = 30000;
  int together = 0;
  for (int seed = 0; seed < runs; ++seed) {
    HdpSampler s = HdpSampler::Initialize({Doc({0, 1, 2})}, 3,
                                          Params(1, 1, 0.1, static_cast<std::uint64_t>(seed)));
    if (s.total_tables() == 1) ++together;
  }
  CHECK(static_cast<double>(together) / runs == doctest::Approx(1.0 / 3.0).epsilon(0.03));
}

TEST_CASE("cond_density_word") {
  SUBCASE("smoothing formula: (4 + 1) / (10 + 5)") {
    // One table of ten tokens: word 0 four times, the rest spread over 1..4.
    HdpSampler s = HdpSampler::FromPartition(
        {Doc({0, 0, 0, 0, 1, 1, 2, 3, 4, 4})}, 5, Params(1, 1, 1.0),
        {{0, 0, 0, 0, 0, 0, 0, 0, 0, 0}}, {{0}});
    CHECK(s.CondDensityWord(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(CollapsedDensity(4, 10, 1.0, 5) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  }
  SUBCASE("unseen topic has uniform density 1/V") {
    HdpSampler s = HdpSampler::FromPartition({Doc({0})}, 10, Params(1, 1, 0.5),
                                             {{0}}, {{0}});
    for (WordId w = 0; w < 10; ++w) CHECK(s.CondDensityWord(HdpSampler::kNew, w) == 0.1);
  }
  SUBCASE("no mass on the word and beta -> 0 gives density -> 0") {
    CHECK(CollapsedDensity(0, 10, 1e-12, 5) < 1e-12);
  }
}

TEST_CASE("likelihood_new_table") {
  SUBCASE("no live topics gives 1/V") {
    HdpSampler s = HdpSampler::FromPartition({Doc({2})}, 4, Params(1, 1, 0.5),
                                             {{0}}, {{0}});
    s.UnseatWord(0, 0);
    CHECK(s.num_live_topics() == 0);
    CHECK(s.LikelihoodNewTable(2) == doctest::Approx(0.25).epsilon(1e-15));
  }
  SUBCASE("one topic with two tables: (2/3)(1/2) + (1/3)(1/4) = 5/12") {
    // Two single-word tables of word 0 on topic 0; beta = 1, V = 4 gives
    // f(0) = (2 + 1) / (2 + 4) = 1/2.
    HdpSampler s = HdpSampler::FromPartition({Doc({0}), Doc({0})}, 4, Params(1, 1, 1.0),
                                             {{0}, {0}}, {{0}, {0}});
    REQUIRE(s.CondDensityWord(0, 0) == doctest::Approx(0.5));
    CHECK(s.LikelihoodNewTable(0) == doctest::Approx(5.0 / 12.0).epsilon(1e-14));
  }
  SUBCASE("gamma -> 0 reduces to the weighted topic densities") {
    HdpSampler s = HdpSampler::FromPartition({Doc({0}), Doc({1})}, 4,
                                             Params(1, 1e-12, 1.0), {{0}, {0}},
                                             {{0}, {1}});
    const double mix = 0.5 * s.CondDensityWord(0, 0) + 0.5 * s.CondDensityWord(1, 0);
    CHECK(s.LikelihoodNewTable(0) == doctest::Approx(mix).epsilon(1e-9));
  }
}

TEST_CASE("table probabilities") {
  SUBCASE("sizes {3, 1}, equal densities, alpha = 1 -> (0.6, 0.2, 0.2)") {
    const std::vector<double> sizes = {3, 1}, dens = {0.4, 0.4};
    auto p = TableProbabilities(sizes, dens, 1.0, 0.4);
    REQUIRE(p.size() == 3);
    CHECK(p[0] == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(p[1] == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(p[2] == doctest::Approx(0.2).epsilon(1e-14));
  }
  SUBCASE("alpha = 0 never opens a table") {
    const std::vector<double> sizes = {2, 5}, dens = {0.1, 0.3};
    CHECK(TableProbabilities(sizes, dens, 0.0, 0.7).back() == 0.0);
  }
  SUBCASE("a single-word document mid-sweep must open a new table") {
    HdpSampler s = HdpSampler::FromPartition({Doc({0}), Doc({0})}, 3,
                                             Params(1, 1, 0.1), {{0}, {0}},
                                             {{0}, {0}});
    s.UnseatWord(0, 0);
    ChoiceDistribution d = s.TableDistribution(0, 0);
    REQUIRE(d.options.size() == 1);
    CHECK(d.options[0] == HdpSampler::kNew);
    CHECK(d.probs[0] == 1.0);
  }
  SUBCASE("all-zero weights are an invariant violation") {
    const std::vector<double> sizes = {1}, dens = {0.0};
    CHECK_THROWS_AS(TableProbabilities(sizes, dens, 1.0, 0.0), InvariantViolation);
  }
}

TEST_CASE("topic probabilities for a new table") {
  SUBCASE("m = {3, 1}, equal densities, gamma = 0 -> (0.75, 0.25, 0)") {
    const std::vector<double> m = {3, 1}, dens = {0.2, 0.2};
    auto p = TopicProbabilities(m, dens, 0.0, 0.2);
    CHECK(p[0] == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(p[1] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(p[2] == 0.0);
  }
  SUBCASE("very large gamma makes a new topic dominant") {
    const std::vector<double> m = {3, 1}, dens = {0.2, 0.2};
    CHECK(TopicProbabilities(m, dens, 1e6, 0.2).back() > 0.999);
  }
  SUBCASE("the first table in the corpus founds a new topic") {
    HdpSampler s = HdpSampler::FromPartition({Doc({1})}, 3, Params(1, 1, 0.1),
                                             {{0}}, {{0}});
    s.UnseatWord(0, 0);
    ChoiceDistribution d = s.NewTableTopicDistribution(1);
    REQUIRE(d.options.size() == 1);
    CHECK(d.options[0] == HdpSampler::kNew);
  }
}

TEST_CASE("resample_table_topic") {
  SUBCASE("a lone table can only return to a re-created topic") {
    HdpSampler s = HdpSampler::FromPartition({Doc({0, 1})}, 2, Params(1, 1, 0.5),
                                             {{0, 0}}, {{0}});
    s.WithdrawTable(0, 0);
    ChoiceDistribution d = s.TableTopicDistribution(0, 0);
    REQUIRE(d.options.size() == 1);
    CHECK(d.options[0] == HdpSampler::kNew);
    s.AttachTable(0, 0, s.CreateTopic());
    CHECK_NOTHROW(s.Audit());
    CHECK(s.ResampleTableTopic(0, 0) == 0);
    CHECK_NOTHROW(s.Audit());
  }
  SUBCASE("single-word table matches the new-table topic conditional") {
    HdpSampler s = HdpSampler::FromPartition(
        {Doc({0, 1, 1}), Doc({2, 0}), Doc({1})}, 3, Params(1, 0.7, 0.3),
        {{0, 1, 1}, {0, 1}, {0}}, {{0, 1}, {2, 0}, {1}});
    s.WithdrawTable(2, 0);
    ChoiceDistribution table = s.TableTopicDistribution(2, 0);
    ChoiceDistribution fresh = s.NewTableTopicDistribution(1);
    REQUIRE(table.options == fresh.options);
    for (std::size_t i = 0; i < table.probs.size(); ++i) {
      CHECK(table.probs[i] == doctest::Approx(fresh.probs[i]).epsilon(1e-12));
    }
  }
  SUBCASE("two equal topics split the non-new mass equally") {
    // After withdrawal: m = {1, 1}, f_k(2) = 0.5 / (1 + 1.5) = 0.2 each,
    // new weight 1/3. Normalized: 3/11, 3/11, 5/11.
    HdpSampler s = HdpSampler::FromPartition({Doc({0}), Doc({1}), Doc({2})}, 3,
                                             Params(1, 1, 0.5), {{0}, {0}, {0}},
                                             {{0}, {1}, {2}});
    s.WithdrawTable(2, 0);
    ChoiceDistribution d = s.TableTopicDistribution(2, 0);
    REQUIRE(d.probs.size() == 3);
    CHECK(d.probs[0] == d.probs[1]);
    CHECK(d.probs[0] == doctest::Approx(3.0 / 11.0).epsilon(1e-14));
    CHECK(d.probs[2] == doctest::Approx(5.0 / 11.0).epsilon(1e-14));
  }
}

TEST_CASE("gibbs_sweep on a single one-word document stays at one table and topic") {
  HdpSampler s = HdpSampler::Initialize({Doc({0})}, 1, Params(1, 1, 0.01));
  for (int it = 0; it < 25; ++it) {
    s.Sweep();
    CHECK(s.total_tables() == 1);
    CHECK(s.num_live_topics() == 1);
  }
}

TEST_CASE("audit passes after every sweep and conservation holds") {
  Rng rng(99);
  for (WeightingMode mode : {WeightingMode::kCount, WeightingMode::kPpmi}) {
    auto docs = senseshift::testing::RandomCorpus(rng, 30, 9, 12);
    PpmiMatrix ppmi = ComputePpmi(BuildCooccurrence(docs, 12, 2));
    Hyperparams hp = Params(0.8, 1.5, 0.05, 17);
    hp.weighting = mode;
    HdpSampler s = HdpSampler::Initialize(docs, 12, hp, &ppmi);
    CHECK_NOTHROW(s.Audit());
    for (int it = 0; it < 10; ++it) {
      s.Sweep();
      REQUIRE_NOTHROW(s.Audit());
      int m = 0;
      for (int k : s.LiveTopics()) m += s.topics()[k].tables;
      CHECK(m == s.total_tables());
      for (std::size_t j = 0; j < s.num_docs(); ++j) {
        int n = 0;
        for (const auto& t : s.tables(j)) {
          if (t.live()) n += t.count;
        }
        CHECK(n == static_cast<int>(s.doc(j).tokens.size()));
      }
    }
  }
}

TEST_CASE("ppmi weighting raises token weights above one") {
  std::vector<PseudoDocument> docs = {Doc({0, 1}), Doc({0, 1}), Doc({2, 3}), Doc({0, 2})};
  PpmiMatrix ppmi = ComputePpmi(BuildCooccurrence(docs, 4, 2));
  Hyperparams hp = Params(1, 1, 0.1);
  hp.weighting = WeightingMode::kPpmi;
  HdpSampler s = HdpSampler::Initialize(docs, 4, hp, &ppmi);
  const double expected = 1.0 + ppmi.Weight(0, 1);
  CHECK(s.token_weight(0, 0) == doctest::Approx(expected));
  CHECK(s.token_weight(0, 0) > 1.0);
  hp.weighting = WeightingMode::kPpmi;
  CHECK_THROWS_AS(HdpSampler::Initialize(docs, 4, hp, nullptr), ConfigError);
}

TEST_CASE("audit names the broken counter") {
  HdpSampler s = HdpSampler::FromPartition({Doc({0, 1}), Doc({1})}, 2, Params(1, 1, 0.5),
                                           {{0, 0}, {0}}, {{0}, {0}});
  s.WithdrawTable(1, 0);
  try {
    s.Audit();
    FAIL("expected audit failure");
  } catch (const InvariantViolation& e) {
    const std::string msg = e.what();
    CHECK(msg.find("audit failed") != std::string::npos);
    CHECK(msg.find("document 1 table 0") != std::string::npos);
  }
}

TEST_CASE("every sampling distribution is normalized") {
  Rng rng(1234);
  auto docs = senseshift::testing::RandomCorpus(rng, 20, 8, 10, 2);
  HdpSampler s = HdpSampler::Initialize(docs, 10, Params(1, 1, 0.05, 5));
  s.Run(3);
  for (std::size_t j = 0; j < s.num_docs(); ++j) {
    for (std::size_t i = 0; i < s.doc(j).tokens.size(); ++i) {
      s.UnseatWord(j, i);
      ChoiceDistribution tables = s.TableDistribution(j, i);
      CHECK(std::abs(Sum(tables.probs) - 1.0) < 1e-12);
      ChoiceDistribution topics = s.NewTableTopicDistribution(s.doc(j).tokens[i]);
      CHECK(std::abs(Sum(topics.probs) - 1.0) < 1e-12);
      int t = s.SampleTable(j, i);
      if (t == HdpSampler::kNew) {
        int k = s.SampleTopicForNewTable(s.doc(j).tokens[i]);
        t = s.CreateTable(j, k == HdpSampler::kNew ? s.CreateTopic() : k);
      }
      s.SeatWord(j, i, t);
    }
  }
  for (std::size_t j = 0; j < s.num_docs(); ++j) {
    for (std::size_t t = 0; t < s.tables(j).size(); ++t) {
      if (!s.tables(j)[t].live()) continue;
      const int k = s.tables(j)[t].topic;
      s.WithdrawTable(j, static_cast<int>(t));
      ChoiceDistribution d = s.TableTopicDistribution(j, static_cast<int>(t));
      CHECK(std::abs(Sum(d.probs) - 1.0) < 1e-12);
      const bool alive = k < static_cast<int>(s.topics().size()) && s.topics()[k].live();
      s.AttachTable(j, static_cast<int>(t), alive ? k : s.CreateTopic());
    }
  }
  CHECK_NOTHROW(s.Audit());
}

TEST_CASE("identical corpus and seed give identical states") {
  Rng rng(8);
  auto docs = senseshift::testing::RandomCorpus(rng, 40, 10, 15);
  auto run = [&](std::uint64_t seed) {
    HdpSampler s = HdpSampler::Initialize(docs, 15, Params(1, 1, 0.01, seed));
    s.Run(5);
    return Snapshot(s);
  };
  CHECK(run(3) == run(3));
  CHECK(run(3) != run(4));
}

TEST_CASE("exact enumeration oracle on the 2 x 2 instance") {
  // Frozen from an independent enumeration: 27 canonical configurations.
  auto exact = ExactCrfPosterior({{0, 1}, {1, 1}}, 2, 1.0, 1.0, 0.5);
  CHECK(exact.size() == 27);
  double total = 0.0;
  for (const auto& [k, p] : exact) total += p;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  const CrfKey split_then_shared{{{0, 1}, {0, 0}}, {0, 1, 1}};
  const CrfKey all_shared{{{0, 0}, {0, 0}}, {0, 0}};
  CHECK(exact.at(split_then_shared) == doctest::Approx(4.0 / 31.0).epsilon(1e-12));
  CHECK(exact.at(all_shared) == doctest::Approx(3.0 / 31.0).epsilon(1e-12));
}

TEST_CASE("long-run partition frequencies match the exact posterior") {
  SUBCASE("2 documents x 2 tokens") {
    const double tv = ChainTotalVariation({Doc({0, 1}), Doc({1, 1})}, 2,
                                          Params(1, 1, 0.5, 21), 500, 20000);
    CHECK(tv < 0.05);
  }
  SUBCASE("three documents, five tokens, unequal concentrations") {
    const double tv = ChainTotalVariation({Doc({0}), Doc({0, 1}), Doc({1, 2})}, 3,
                                          Params(0.7, 1.6, 0.4, 22), 500, 20000);
    CHECK(tv < 0.05);
  }
}

TEST_CASE("extract_sense_distributions") {
  // Word 0 appears four times in the reference corpus on topics 1,1,2,2;
  // word 1 appears only in focus documents, always on topic 0.
  std::vector<PseudoDocument> docs = {
      Doc({0, 0}, CorpusLabel::kReference), Doc({0, 0}, CorpusLabel::kReference),
      Doc({1, 1}, CorpusLabel::kFocus)};
  HdpSampler s = HdpSampler::FromPartition(docs, 3, Params(1, 1, 0.1),
                                           {{0, 0}, {0, 0}, {0, 0}},
                                           {{1}, {2}, {0}});
  const std::vector<WordId> targets = {0, 1, 2, 42};
  auto profiles = s.ExtractSenseDistributions(targets);
  REQUIRE(profiles.size() == 4);

  REQUIRE(profiles[0].p_ref.has_value());
  CHECK(*profiles[0].p_ref == SenseDistribution{{1, 0.5}, {2, 0.5}});
  CHECK(profiles[0].n_ref == 4);
  CHECK_FALSE(profiles[0].p_focus.has_value());  // absent from focus

  REQUIRE(profiles[1].p_focus.has_value());
  CHECK(*profiles[1].p_focus == SenseDistribution{{0, 1.0}});  // point mass
  CHECK_FALSE(profiles[1].p_ref.has_value());

  CHECK_FALSE(profiles[2].missing);  // in vocabulary, never used
  CHECK_FALSE(profiles[2].p_ref.has_value());
  CHECK(profiles[3].missing);
}

TEST_CASE("sense distributions sum to one") {
  Rng rng(77);
  auto docs = senseshift::testing::RandomCorpus(rng, 50, 10, 20);
  HdpSampler s = HdpSampler::Initialize(docs, 20, Params(1, 1, 0.05, 9));
  s.Run(3);
  std::vector<WordId> all(20);
  std::iota(all.begin(), all.end(), 0);
  for (const SenseProfile& p : s.ExtractSenseDistributions(all)) {
    for (const auto* d : {&p.p_ref, &p.p_focus}) {
      if (!d->has_value()) continue;
      double sum = 0.0;
      for (const auto& [k, v] : **d) {
        CHECK(v >= 0.0);
        sum += v;
      }
      CHECK(std::abs(sum - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("state snapshot has one line per token") {
  HdpSampler s = HdpSampler::Initialize({Doc({0, 1, 2}), Doc({1})}, 3, Params(1, 1, 0.1));
  auto path = std::filesystem::temp_directory_path() / "senseshift_state.tsv";
  s.WriteSnapshot(path);
  std::ifstream in(path);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    ++lines;
    CHECK(std::count(line.begin(), line.end(), '\t') == 3);
  }
  CHECK(lines == 4);
}
