#include "senseshift/pipeline.h"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "senseshift/cooccurrence.h"
#include "senseshift/errors.h"

namespace senseshift {

// Defined in the generated stopwords source.
extern const char* const kBundledStopwords;

namespace {

constexpr std::size_t kTopWordsPerTopic = 10;

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

struct PreparedCorpus {
  Vocabulary vocab;
  std::vector<PseudoDocument> docs;
};

PreparedCorpus Prepare(const RunConfig& cfg) {
  const PreprocessConfig pre = cfg.Preprocess();
  std::vector<RawDocument> ref = LoadCorpus(cfg.reference_path, CorpusLabel::kReference);
  std::vector<RawDocument> focus = LoadCorpus(cfg.focus_path, CorpusLabel::kFocus);
  std::vector<RawDocument> all;
  all.reserve(ref.size() + focus.size());
  all.insert(all.end(), ref.begin(), ref.end());
  all.insert(all.end(), focus.begin(), focus.end());
  PreparedCorpus out;
  out.vocab = BuildVocabulary(all, pre);
  out.docs = PoolCorpora(FilterTokens(ref, out.vocab, pre),
                         FilterTokens(focus, out.vocab, pre), out.vocab.size());
  if (out.docs.empty()) {
    throw ConfigError("no documents survive preprocessing");
  }
  return out;
}

HdpSampler Sample(const RunConfig& cfg, const PreparedCorpus& corpus) {
  std::optional<PpmiMatrix> ppmi;
  if (cfg.weighting_mode == WeightingMode::kPpmi || cfg.dump_ppmi) {
    CountMatrix counts = BuildCooccurrence(corpus.docs, corpus.vocab.size(), cfg.window);
    ppmi = ComputePpmi(counts);
    if (cfg.dump_ppmi) WritePpmi(cfg.output_dir / "ppmi.tsv", *ppmi, corpus.vocab);
  }
  Hyperparams hp = cfg.SamplerHyperparams();
  HdpSampler sampler = HdpSampler::Initialize(corpus.docs, corpus.vocab.size(), hp,
                                              ppmi ? &*ppmi : nullptr);
  sampler.Run();
  sampler.Audit();
  if (cfg.write_snapshot) sampler.WriteSnapshot(cfg.output_dir / "state.tsv");
  return sampler;
}

std::vector<TopicSummary> SummarizeTopics(const HdpSampler& sampler,
                                          const Vocabulary& vocab) {
  std::vector<TopicSummary> out;
  for (int k : sampler.LiveTopics()) {
    const TopicRecord& rec = sampler.topics()[k];
    TopicSummary s{k, rec.tables, rec.total_mass, {}};
    for (const auto& [w, mass] : sampler.TopWords(k, kTopWordsPerTopic)) {
      s.top_words.emplace_back(vocab.Word(w), mass);
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string Describe(const std::optional<SenseDistribution>& dist) {
  if (!dist) return "ABSENT";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, p] : *dist) {
    if (!first) os << ' ';
    first = false;
    os << k << ':' << FormatScore(p);
  }
  return os.str();
}

void WriteConfig(std::ostream& out, const RunConfig& cfg, std::string_view mode) {
  out << "== CONFIG ==\n";
  out << "mode\t" << mode << '\n';
  out << "reference_path\t" << cfg.reference_path.string() << '\n';
  out << "focus_path\t" << cfg.focus_path.string() << '\n';
  out << "targets_path\t" << cfg.targets_path.string() << '\n';
  out << "stopwords_path\t"
      << (cfg.stopwords_path ? cfg.stopwords_path->string() : "(bundled)") << '\n';
  out << "window\t" << cfg.window << '\n';
  out << "min_freq_floor\t" << cfg.min_freq_floor << '\n';
  out << "floor_comparator\t"
      << (cfg.floor_comparator == FloorComparator::kStrictlyBelow ? "lt" : "le") << '\n';
  out << "lowercase\t" << (cfg.lowercase ? "true" : "false") << '\n';
  out << "alpha\t" << FormatScore(cfg.alpha) << '\n';
  out << "gamma\t" << FormatScore(cfg.gamma) << '\n';
  out << "beta\t" << FormatScore(cfg.beta) << '\n';
  out << "iterations\t" << cfg.iterations << '\n';
  out << "threshold\t" << FormatScore(cfg.threshold) << '\n';
  out << "seed\t" << cfg.seed << '\n';
  out << "weighting_mode\t" << WeightingModeName(cfg.weighting_mode) << '\n';
  out << "jsd_mode\t" << (cfg.jsd_mode == JsdMode::kDistance ? "distance" : "divergence")
      << '\n';
  out << "top_n\t" << cfg.top_n << '\n';
  out << "language\t" << cfg.language << '\n';
  out << '\n';
}

void WriteTopics(std::ostream& out, const std::vector<TopicSummary>& topics) {
  out << "== TOPICS ==\n";
  for (const TopicSummary& t : topics) {
    out << "topic " << t.topic << "\ttables=" << t.tables
        << "\tmass=" << FormatScore(t.mass) << "\ttop:";
    for (const auto& [word, mass] : t.top_words) out << ' ' << word;
    out << '\n';
  }
  out << '\n';
}

std::ofstream OpenOutput(const std::filesystem::path& path) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

std::vector<WordId> TargetIds(const std::vector<std::string>& targets,
                              const Vocabulary& vocab, bool lowercase) {
  std::vector<WordId> ids;
  ids.reserve(targets.size());
  for (const std::string& t : targets) {
    ids.push_back(vocab.Find(lowercase ? AsciiLower(t) : t));
  }
  return ids;
}

std::int64_t PooledFreq(const Vocabulary& vocab, WordId id) {
  return id == kUnknownWord ? 0 : vocab.Frequency(id).pooled();
}

}  // namespace

const std::unordered_set<std::string>& DefaultStopwords() {
  static const std::unordered_set<std::string> words = [] {
    std::unordered_set<std::string> out;
    std::istringstream in(kBundledStopwords);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      out.insert(line);
    }
    return out;
  }();
  return words;
}

std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view stream) {
  // FNV-1a of the stream name.
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : stream) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return SplitMix64(seed ^ SplitMix64(h));
}

Hyperparams RunConfig::SamplerHyperparams() const {
  Hyperparams hp;
  hp.alpha = alpha;
  hp.gamma = gamma;
  hp.beta = beta;
  hp.iterations = iterations;
  hp.seed = DeriveSeed(seed, "sampler");
  hp.weighting = weighting_mode;
  return hp;
}

PreprocessConfig RunConfig::Preprocess() const {
  PreprocessConfig pre;
  if (!stopwords_path) {
    pre.stopwords = DefaultStopwords();
  } else if (stopwords_path->string() != "none") {
    pre.stopwords = LoadWordList(*stopwords_path);
  }
  if (lowercase) {
    std::unordered_set<std::string> folded;
    for (const std::string& w : pre.stopwords) folded.insert(AsciiLower(w));
    pre.stopwords = std::move(folded);
  }
  pre.min_freq_floor = min_freq_floor;
  pre.comparator = floor_comparator;
  pre.lowercase = lowercase;
  return pre;
}

void RunConfig::Validate() const {
  if (window < 1) throw ConfigError("window must be >= 1");
  if (min_freq_floor < 0) throw ConfigError("min-freq-floor must be >= 0");
  ValidateThreshold(threshold);
  SamplerHyperparams().Validate();
  if (language.empty()) throw ConfigError("language must not be empty");
}

DetectionOutcome RunChangeDetection(const RunConfig& cfg) {
  cfg.Validate();
  if (cfg.targets_path.empty()) throw ConfigError("detect needs --targets-path");
  const std::vector<std::string> targets = LoadTargets(cfg.targets_path);
  if (targets.empty()) throw ConfigError("targets file is empty: " + cfg.targets_path.string());
  std::filesystem::create_directories(cfg.output_dir);

  const PreparedCorpus corpus = Prepare(cfg);
  const HdpSampler sampler = Sample(cfg, corpus);
  const std::vector<WordId> ids = TargetIds(targets, corpus.vocab, cfg.lowercase);

  DetectionOutcome out;
  out.vocab_size = corpus.vocab.size();
  out.num_docs = corpus.docs.size();
  out.profiles = sampler.ExtractSenseDistributions(ids);
  for (std::size_t i = 0; i < targets.size(); ++i) {
    out.results.push_back(ScoreProfile(out.profiles[i], targets[i],
                                       PooledFreq(corpus.vocab, ids[i]),
                                       cfg.threshold, cfg.jsd_mode));
  }
  out.topics = SummarizeTopics(sampler, corpus.vocab);

  const std::filesystem::path answer = cfg.output_dir / "answer";
  out.task1_path = answer / "task1" / (cfg.language + ".txt");
  out.task2_path = answer / "task2" / (cfg.language + ".txt");
  out.report_path = cfg.output_dir / "report.txt";
  {
    std::ofstream task1 = OpenOutput(out.task1_path);
    std::ofstream task2 = OpenOutput(out.task2_path);
    for (const ChangeResult& r : out.results) {
      task1 << r.word << '\t' << (r.changed.value_or(false) ? 1 : 0) << '\n';
      task2 << r.word << '\t' << FormatScore(r.jsd.value_or(0.0)) << '\n';
    }
  }

  std::ofstream report = OpenOutput(out.report_path);
  WriteConfig(report, cfg, "detect");
  report << "vocabulary\t" << out.vocab_size << "\ndocuments\t" << out.num_docs
         << "\nlive_topics\t" << out.topics.size() << "\n\n";
  WriteTopics(report, out.topics);
  report << "== TARGETS ==\n";
  report << "# MISSING (not in vocabulary) and UNDEFINED (absent from one corpus)\n"
            "# targets are written to the answer files as label 0, score 0.\n";
  for (std::size_t i = 0; i < out.results.size(); ++i) {
    const ChangeResult& r = out.results[i];
    const SenseProfile& p = out.profiles[i];
    const char* status = r.missing ? "MISSING" : (r.jsd ? "OK" : "UNDEFINED");
    report << r.word << "\tstatus=" << status << "\tjsd="
           << (r.jsd ? FormatScore(*r.jsd) : std::string("UNDEFINED")) << "\tchanged="
           << (r.changed ? (*r.changed ? "1" : "0") : "UNDEFINED")
           << "\tnovelty=" << FormatScore(r.novelty) << "\tn_ref=" << p.n_ref
           << "\tn_focus=" << p.n_focus << '\n';
    if (!r.missing) {
      report << "  ref\t" << Describe(p.p_ref) << "\n  focus\t" << Describe(p.p_focus)
             << '\n';
    }
  }
  report << "\n== RANKING ==\n";
  std::size_t rank = 0;
  for (const ChangeResult& r : RankWords(out.results, RankKey::kJsd, 0)) {
    report << ++rank << '\t' << r.word << '\t'
           << (r.jsd ? FormatScore(*r.jsd) : std::string(r.missing ? "MISSING" : "UNDEFINED"))
           << '\n';
  }
  return out;
}

NoveltyOutcome RunNovelty(const RunConfig& cfg) {
  cfg.Validate();
  std::filesystem::create_directories(cfg.output_dir);
  const PreparedCorpus corpus = Prepare(cfg);
  const HdpSampler sampler = Sample(cfg, corpus);

  std::vector<std::string> words;
  std::vector<WordId> ids;
  if (!cfg.targets_path.empty()) {
    words = LoadTargets(cfg.targets_path);
    ids = TargetIds(words, corpus.vocab, cfg.lowercase);
  } else {
    words = corpus.vocab.words();
    ids.resize(words.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<WordId>(i);
  }
  const std::vector<SenseProfile> profiles = sampler.ExtractSenseDistributions(ids);
  std::vector<ChangeResult> results;
  results.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    results.push_back(ScoreProfile(profiles[i], words[i], PooledFreq(corpus.vocab, ids[i]),
                                   cfg.threshold, cfg.jsd_mode));
  }

  NoveltyOutcome out;
  out.ranking = RankWords(results, RankKey::kNovelty, cfg.top_n);
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < words.size(); ++i) index.emplace(words[i], i);

  out.ranking_path = cfg.output_dir / "novelty.tsv";
  out.report_path = cfg.output_dir / "novelty_report.txt";
  std::ofstream ranking = OpenOutput(out.ranking_path);
  std::ofstream report = OpenOutput(out.report_path);
  WriteConfig(report, cfg, "novelty");
  const std::vector<TopicSummary> topics = SummarizeTopics(sampler, corpus.vocab);
  WriteTopics(report, topics);
  std::map<int, const TopicSummary*> by_topic;
  for (const TopicSummary& t : topics) by_topic[t.topic] = &t;

  report << "== RANKING ==\n";
  std::size_t rank = 0;
  for (const ChangeResult& r : out.ranking) {
    const SenseProfile& p = profiles[index.at(r.word)];
    NoveltyScore score = r.missing ? NoveltyScore{} : NoveltyDiff(p);
    ranking << r.word << '\t' << FormatScore(r.novelty) << '\n';
    report << ++rank << '\t' << r.word << "\tnovelty=" << FormatScore(r.novelty)
           << "\tn_ref=" << p.n_ref << "\tn_focus=" << p.n_focus
           << (r.missing ? "\tMISSING" : "") << '\n';
    for (const auto& [k, d] : score.per_sense) {
      report << "  sense " << k << "\tdiff=" << FormatScore(d) << "\ttop:";
      auto it = by_topic.find(k);
      if (it != by_topic.end()) {
        for (const auto& [word, mass] : it->second->top_words) report << ' ' << word;
      }
      report << '\n';
    }
    out.breakdown.push_back(std::move(score));
  }
  return out;
}

std::vector<TaskScores> RunEval(const std::filesystem::path& pred_dir,
                                const std::filesystem::path& gold_dir) {
  namespace fs = std::filesystem;
  std::map<std::string, TaskScores> by_language;
  bool any = false;
  for (const char* task : {"task1", "task2"}) {
    const fs::path gold_task = gold_dir / task;
    if (!fs::is_directory(gold_task)) continue;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(gold_task)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& gold_file : files) {
      any = true;
      const fs::path pred_file = pred_dir / task / gold_file.filename();
      if (!fs::is_regular_file(pred_file)) {
        throw InputError("layout mismatch: missing prediction file " + pred_file.string());
      }
      const std::string language = gold_file.stem().string();
      TaskScores& s = by_language[language];
      s.language = language;
      if (std::string(task) == "task1") {
        s.has_task1 = true;
        s.accuracy = Accuracy(ReadLabels(pred_file), ReadLabels(gold_file));
      } else {
        s.has_task2 = true;
        s.spearman = Spearman(ReadScores(pred_file), ReadScores(gold_file));
      }
    }
  }
  if (!any) {
    throw InputError("layout mismatch: no task1/ or task2/ gold files under " +
                     gold_dir.string());
  }
  std::vector<TaskScores> out;
  for (auto& [lang, s] : by_language) out.push_back(std::move(s));
  return out;
}

void PrintScores(std::ostream& out, const std::vector<TaskScores>& scores) {
  for (const TaskScores& s : scores) {
    if (s.has_task1) {
      out << s.language << "\ttask1\taccuracy\t"
          << (s.accuracy ? FormatScore(*s.accuracy) : std::string("UNDEFINED")) << '\n';
    }
    if (s.has_task2) {
      out << s.language << "\ttask2\tspearman\t"
          << (s.spearman ? FormatScore(*s.spearman) : std::string("UNDEFINED")) << '\n';
    }
  }
}

SyntheticBenchmark RunSynthetic(const SyntheticSpec& spec,
                                const std::filesystem::path& output_dir,
                                const std::string& language) {
  SyntheticBenchmark bench = GenerateSynthetic(spec);
  WriteSynthetic(bench, output_dir, language);
  return bench;
}

}  // namespace senseshift
