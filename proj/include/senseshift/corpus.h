#ifndef SENSESHIFT_CORPUS_H_
#define SENSESHIFT_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace senseshift {

using WordId = std::int32_t;
inline constexpr WordId kUnknownWord = -1;

enum class CorpusLabel : std::uint8_t { kReference = 0, kFocus = 1 };

inline constexpr int kNumLabels = 2;

inline int LabelIndex(CorpusLabel label) { return static_cast<int>(label); }
std::string_view LabelName(CorpusLabel label);

// One line of input text before interning.
struct RawDocument {
  CorpusLabel label = CorpusLabel::kReference;
  std::size_t line = 0;  // 1-based source line
  std::vector<std::string> tokens;
};

struct PseudoDocument {
  std::int64_t id = 0;
  CorpusLabel label = CorpusLabel::kReference;
  std::vector<WordId> tokens;
};

enum class FloorComparator : std::uint8_t {
  kStrictlyBelow,  // drop pooled freq < floor
  kAtOrBelow,      // drop pooled freq <= floor
};

struct PreprocessConfig {
  std::unordered_set<std::string> stopwords;
  std::int64_t min_freq_floor = 1;
  FloorComparator comparator = FloorComparator::kStrictlyBelow;
  bool lowercase = true;

  // Throws ConfigError on a negative floor.
  void Validate() const;
};

struct WordFrequency {
  std::int64_t reference = 0;
  std::int64_t focus = 0;
  std::int64_t pooled() const { return reference + focus; }
};

class Vocabulary {
 public:
  // Returns the existing id when the word is already present.
  WordId Add(const std::string& word);

  WordId Find(std::string_view word) const;
  bool Contains(std::string_view word) const { return Find(word) != kUnknownWord; }
  const std::string& Word(WordId id) const { return id_to_word_.at(id); }
  std::size_t size() const { return id_to_word_.size(); }
  bool empty() const { return id_to_word_.empty(); }

  const WordFrequency& Frequency(WordId id) const { return freq_.at(id); }
  void AddCount(WordId id, CorpusLabel label, std::int64_t count = 1);

  const std::vector<std::string>& words() const { return id_to_word_; }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };
  std::unordered_map<std::string, WordId, Hash, std::equal_to<>> word_to_id_;
  std::vector<std::string> id_to_word_;
  std::vector<WordFrequency> freq_;
};

// One document per non-blank line, whitespace tokenized. Files ending in
// ".gz" are decompressed transparently. Throws ConfigError when the file
// cannot be opened and InputError on invalid UTF-8 (naming the line).
std::vector<RawDocument> LoadCorpus(const std::filesystem::path& path,
                                    CorpusLabel label);

// Parses in-memory text with the same rules as LoadCorpus.
std::vector<RawDocument> ParseCorpus(std::string_view text, CorpusLabel label);

// Counts are taken over all supplied documents (both corpora pooled).
// Ids follow first appearance order.
Vocabulary BuildVocabulary(const std::vector<RawDocument>& docs,
                           const PreprocessConfig& cfg);

// Drops out-of-vocabulary tokens and documents left empty. Ids are
// assigned 0..n-1 in input order.
std::vector<PseudoDocument> FilterTokens(const std::vector<RawDocument>& docs,
                                         const Vocabulary& vocab,
                                         const PreprocessConfig& cfg);

// Concatenates reference then focus documents and renumbers ids globally.
// Throws InvariantViolation if any token id is outside [0, vocab_size).
std::vector<PseudoDocument> PoolCorpora(
    const std::vector<PseudoDocument>& ref_docs,
    const std::vector<PseudoDocument>& focus_docs, std::size_t vocab_size);

// One surface form per line; blank lines and lines starting with '#'
// are ignored.
std::unordered_set<std::string> LoadWordList(const std::filesystem::path& path);
std::vector<std::string> LoadTargets(const std::filesystem::path& path);

bool IsValidUtf8(std::string_view text);
std::string AsciiLower(std::string_view s);

}  // namespace senseshift

#endif  // SENSESHIFT_CORPUS_H_
