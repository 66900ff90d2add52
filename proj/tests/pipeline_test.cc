#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "senseshift/errors.h"
#include "senseshift/pipeline.h"

using namespace senseshift;

namespace {

std::filesystem::path Scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("senseshift_pipeline_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream(path, std::ios::binary) << text;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> Lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

const char* kBankCorpus =
    "the river bank was muddy after rain\n"
    "she sat on the bank of the river\n"
    "the bank approved the loan today\n"
    "money deposited at the bank branch\n"
    "fish swim near the river bank\n"
    "the bank raised interest rates\n";

RunConfig BaseConfig(const std::filesystem::path& dir) {
  RunConfig cfg;
  cfg.reference_path = dir / "ref.txt";
  cfg.focus_path = dir / "focus.txt";
  cfg.targets_path = dir / "targets.txt";
  cfg.output_dir = dir / "out";
  cfg.iterations = 5;
  cfg.seed = 7;
  return cfg;
}

}  // namespace

TEST_CASE("identical corpora give zero divergence and no change") {
  auto dir = Scratch("identical");
  WriteFile(dir / "ref.txt", kBankCorpus);
  WriteFile(dir / "focus.txt", kBankCorpus);
  WriteFile(dir / "targets.txt", "bank\nriver\n");
  RunConfig cfg = BaseConfig(dir);
  cfg.gamma = 1e-3;  // a single shared topic makes both sides comparable
  DetectionOutcome out = RunChangeDetection(cfg);
  REQUIRE(out.results.size() == 2);
  for (const auto& r : out.results) {
    REQUIRE(r.jsd);
    CHECK(*r.jsd < 0.05);
    CHECK(*r.changed == false);
  }
  for (const auto& line : Lines(out.task1_path)) CHECK(line.substr(line.find('\t')) == "\t0");
}

TEST_CASE("answer files follow target order and flag missing words") {
  auto dir = Scratch("order");
  WriteFile(dir / "ref.txt", kBankCorpus);
  WriteFile(dir / "focus.txt", "the bank branch opened downtown\nbank fees went up\n");
  WriteFile(dir / "targets.txt", "river\nzebra\nbank\n");
  DetectionOutcome out = RunChangeDetection(BaseConfig(dir));

  auto task1 = Lines(out.task1_path);
  auto task2 = Lines(out.task2_path);
  REQUIRE(task1.size() == 3);
  REQUIRE(task2.size() == 3);
  CHECK(task1[0].rfind("river\t", 0) == 0);
  CHECK(task1[1] == "zebra\t0");
  CHECK(task2[1] == "zebra\t0.000000000");
  CHECK(task1[2].rfind("bank\t", 0) == 0);
  CHECK(out.results[1].missing);
  // "river" never occurs in the focus corpus: undefined, written as 0.
  CHECK_FALSE(out.results[0].jsd);
  CHECK(task2[0] == "river\t0.000000000");

  const std::string report = ReadFile(out.report_path);
  CHECK(report.find("zebra\tstatus=MISSING") != std::string::npos);
  CHECK(report.find("river\tstatus=UNDEFINED") != std::string::npos);
  CHECK(report.find("== TOPICS ==") != std::string::npos);
}

TEST_CASE("empty targets file is a configuration error") {
  auto dir = Scratch("empty_targets");
  WriteFile(dir / "ref.txt", kBankCorpus);
  WriteFile(dir / "focus.txt", kBankCorpus);
  WriteFile(dir / "targets.txt", "");
  CHECK_THROWS_AS(RunChangeDetection(BaseConfig(dir)), ConfigError);
}

TEST_CASE("missing corpus file is a configuration error") {
  auto dir = Scratch("missing_corpus");
  WriteFile(dir / "ref.txt", kBankCorpus);
  WriteFile(dir / "targets.txt", "bank\n");
  CHECK_THROWS_AS(RunChangeDetection(BaseConfig(dir)), ConfigError);
}

TEST_CASE("runs with the same seed are byte-identical") {
  auto dir = Scratch("repeat");
  WriteFile(dir / "ref.txt", kBankCorpus);
  WriteFile(dir / "focus.txt", "the bank branch opened downtown\nriver bank erosion\n");
  WriteFile(dir / "targets.txt", "bank\nriver\n");
  RunConfig cfg = BaseConfig(dir);
  RunChangeDetection(cfg);
  const std::string a1 = ReadFile(cfg.output_dir / "answer/task1/english.txt");
  const std::string a2 = ReadFile(cfg.output_dir / "answer/task2/english.txt");
  RunChangeDetection(cfg);
  CHECK(ReadFile(cfg.output_dir / "answer/task1/english.txt") == a1);
  CHECK(ReadFile(cfg.output_dir / "answer/task2/english.txt") == a2);
}

TEST_CASE("novelty ranking surfaces a focus-only sense") {
  auto dir = Scratch("novelty");
  WriteFile(dir / "ref.txt",
            "apple pie baked fresh\napple orchard harvest fruit\n"
            "apple juice fruit sweet\nbread baked fresh oven\n");
  WriteFile(dir / "focus.txt",
            "apple iphone launched keynote\napple iphone stock shares\n"
            "apple keynote software launched\nbread baked fresh oven\n");
  RunConfig cfg = BaseConfig(dir);
  cfg.targets_path.clear();
  cfg.iterations = 20;
  cfg.gamma = 0.5;
  NoveltyOutcome out = RunNovelty(cfg);
  auto lines = Lines(out.ranking_path);
  CHECK(lines.size() <= 25);
  CHECK_FALSE(lines.empty());
  // A focus-only word scores its largest sense share (two tokens: >= 0.5);
  // "bread" is distributed identically in both corpora up to sampling.
  bool seen_iphone = false;
  for (std::size_t i = 0; i < out.ranking.size(); ++i) {
    if (out.ranking[i].word != "iphone") continue;
    seen_iphone = true;
    CHECK(out.ranking[i].novelty >= 0.5);
    CHECK(out.ranking.front().novelty >= out.ranking[i].novelty);
  }
  CHECK(seen_iphone);
  for (std::size_t i = 1; i < out.ranking.size(); ++i) {
    CHECK(out.ranking[i - 1].novelty >= out.ranking[i].novelty);
  }
  CHECK(ReadFile(out.report_path).find("== RANKING ==") != std::string::npos);
}

TEST_CASE("evaluating gold against itself scores perfectly") {
  auto dir = Scratch("eval");
  WriteFile(dir / "gold/task1/english.txt", "a\t1\nb\t0\nc\t1\n");
  WriteFile(dir / "gold/task2/english.txt", "a\t0.9\nb\t0.1\nc\t0.5\n");
  auto scores = RunEval(dir / "gold", dir / "gold");
  REQUIRE(scores.size() == 1);
  CHECK(scores[0].language == "english");
  CHECK(*scores[0].accuracy == 1.0);
  CHECK(*scores[0].spearman == doctest::Approx(1.0));
  std::ostringstream printed;
  PrintScores(printed, scores);
  CHECK(printed.str().find("english\ttask1\taccuracy\t") != std::string::npos);

  WriteFile(dir / "pred/task1/german.txt", "a\t1\n");
  CHECK_THROWS_AS(RunEval(dir / "pred", dir / "gold"), InputError);
  CHECK_THROWS_AS(RunEval(dir / "pred", dir / "nothing"), InputError);
}

TEST_CASE("seed substreams are distinct and stable") {
  CHECK(DeriveSeed(42, "sampler") == DeriveSeed(42, "sampler"));
  CHECK(DeriveSeed(42, "sampler") != DeriveSeed(42, "synthetic"));
  CHECK(DeriveSeed(42, "sampler") != DeriveSeed(43, "sampler"));
}

TEST_CASE("bundled stopwords and the none option") {
  CHECK(DefaultStopwords().count("the") == 1);
  CHECK(DefaultStopwords().count("bank") == 0);
  auto dir = Scratch("stopwords");
  WriteFile(dir / "ref.txt", kBankCorpus);
  WriteFile(dir / "focus.txt", kBankCorpus);
  WriteFile(dir / "targets.txt", "the\n");
  RunConfig cfg = BaseConfig(dir);
  CHECK(RunChangeDetection(cfg).results[0].missing);
  cfg.stopwords_path = "none";
  CHECK_FALSE(RunChangeDetection(cfg).results[0].missing);
}

TEST_CASE("synthetic benchmark round-trips through the loaders") {
  auto dir = Scratch("synth");
  SyntheticSpec spec;
  spec.vocab_size = 80;
  spec.n_topics = 4;
  spec.docs_per_corpus = 200;
  spec.doc_length = 8;
  spec.n_shift_words = 2;
  spec.n_stable_words = 6;
  SyntheticBenchmark bench = RunSynthetic(spec, dir);
  CHECK(LoadCorpus(dir / "reference.txt", CorpusLabel::kReference).size() == 200);
  CHECK(LoadTargets(dir / "targets.txt") == bench.targets);
  RunConfig cfg;
  cfg.reference_path = dir / "reference.txt";
  cfg.focus_path = dir / "focus.txt";
  cfg.targets_path = dir / "targets.txt";
  cfg.output_dir = dir / "out";
  cfg.iterations = 3;
  RunChangeDetection(cfg);
  auto scores = RunEval(dir / "out/answer", dir / "truth");
  REQUIRE(scores.size() == 1);
  CHECK(scores[0].accuracy.has_value());
}

TEST_CASE("command-line exit codes") {
  const std::string cli = SENSESHIFT_CLI_PATH;
  auto dir = Scratch("cli");
  WriteFile(dir / "ref.txt", kBankCorpus);
  WriteFile(dir / "focus.txt", kBankCorpus);
  WriteFile(dir / "targets.txt", "bank\n");
  WriteFile(dir / "empty.txt", "");
  const std::string quiet = " >/dev/null 2>&1";
  auto run = [&](const std::string& args) {
    const int status = std::system((cli + " " + args + quiet).c_str());
    return WEXITSTATUS(status);
  };
  const std::string base = "detect --reference-path " + (dir / "ref.txt").string() +
                           " --focus-path " + (dir / "focus.txt").string() +
                           " --output-dir " + (dir / "out").string();
  CHECK(run(base + " --targets-path " + (dir / "targets.txt").string()) == 0);
  CHECK(std::filesystem::exists(dir / "out/answer/task1/english.txt"));
  CHECK(run(base + " --targets-path " + (dir / "empty.txt").string()) == 2);
  CHECK(run(base + " --targets-path " + (dir / "nope.txt").string()) == 2);
  CHECK(run(base + " --targets-path " + (dir / "targets.txt").string() +
            " --threshold 1.5") == 2);
  CHECK(run("eval --pred-dir " + (dir / "out/answer").string() + " --gold-dir " +
            (dir / "missing").string()) == 3);
  CHECK(run("detect") != 0);
}
