#include "senseshift/corpus.h"

#include <zlib.h>

#include <array>
#include <fstream>
#include <sstream>

#include "senseshift/errors.h"

namespace senseshift {

namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' ||
         c == '\f';
}

std::vector<std::string> SplitWhitespace(std::string_view line) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && IsSpace(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !IsSpace(line[i])) ++i;
    if (i > start) tokens.emplace_back(line.substr(start, i - start));
  }
  return tokens;
}

std::string ReadPlain(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open corpus file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string ReadGzip(const std::filesystem::path& path) {
  gzFile file = gzopen(path.c_str(), "rb");
  if (file == nullptr) {
    throw ConfigError("cannot open corpus file: " + path.string());
  }
  std::string out;
  std::array<char, 1 << 16> buf;
  int n = 0;
  while ((n = gzread(file, buf.data(), static_cast<unsigned>(buf.size()))) > 0) {
    out.append(buf.data(), static_cast<std::size_t>(n));
  }
  int err = 0;
  const char* msg = gzerror(file, &err);
  std::string message = msg == nullptr ? "" : msg;
  gzclose(file);
  if (n < 0 || (err != Z_OK && err != Z_STREAM_END)) {
    throw InputError("gzip read failed for " + path.string() + ": " + message);
  }
  return out;
}

bool IsGzip(const std::filesystem::path& path) {
  return path.extension() == ".gz";
}

template <typename Fn>
void ForEachLine(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    fn(++line_no, text.substr(pos, end - pos));
    pos = end + 1;
  }
}

}  // namespace

std::string_view LabelName(CorpusLabel label) {
  return label == CorpusLabel::kReference ? "reference" : "focus";
}

void PreprocessConfig::Validate() const {
  if (min_freq_floor < 0) {
    throw ConfigError("min_freq_floor must be >= 0, got " +
                      std::to_string(min_freq_floor));
  }
}

WordId Vocabulary::Add(const std::string& word) {
  auto it = word_to_id_.find(word);
  if (it != word_to_id_.end()) return it->second;
  auto id = static_cast<WordId>(id_to_word_.size());
  word_to_id_.emplace(word, id);
  id_to_word_.push_back(word);
  freq_.emplace_back();
  return id;
}

WordId Vocabulary::Find(std::string_view word) const {
  auto it = word_to_id_.find(word);
  return it == word_to_id_.end() ? kUnknownWord : it->second;
}

void Vocabulary::AddCount(WordId id, CorpusLabel label, std::int64_t count) {
  WordFrequency& f = freq_.at(id);
  if (label == CorpusLabel::kReference) {
    f.reference += count;
  } else {
    f.focus += count;
  }
}

bool IsValidUtf8(std::string_view text) {
  std::size_t i = 0;
  const auto* s = reinterpret_cast<const unsigned char*>(text.data());
  const std::size_t n = text.size();
  while (i < n) {
    unsigned char c = s[i];
    if (c < 0x80) {
      ++i;
      continue;
    }
    int extra = 0;
    std::uint32_t cp = 0;
    if ((c & 0xE0) == 0xC0) {
      extra = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + static_cast<std::size_t>(extra) >= n) return false;
    for (int k = 1; k <= extra; ++k) {
      unsigned char cc = s[i + k];
      if ((cc & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (cc & 0x3F);
    }
    // Overlong forms, surrogates and out-of-range code points.
    if ((extra == 1 && cp < 0x80) || (extra == 2 && cp < 0x800) ||
        (extra == 3 && cp < 0x10000) || cp > 0x10FFFF ||
        (cp >= 0xD800 && cp <= 0xDFFF)) {
      return false;
    }
    i += static_cast<std::size_t>(extra) + 1;
  }
  return true;
}

std::string AsciiLower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::vector<RawDocument> ParseCorpus(std::string_view text, CorpusLabel label) {
  std::vector<RawDocument> docs;
  ForEachLine(text, [&](std::size_t line_no, std::string_view line) {
    if (!IsValidUtf8(line)) {
      throw InputError("invalid UTF-8 on line " + std::to_string(line_no));
    }
    auto tokens = SplitWhitespace(line);
    if (tokens.empty()) return;
    docs.push_back(RawDocument{label, line_no, std::move(tokens)});
  });
  return docs;
}

std::vector<RawDocument> LoadCorpus(const std::filesystem::path& path,
                                    CorpusLabel label) {
  if (!std::filesystem::is_regular_file(path)) {
    throw ConfigError("corpus file not found: " + path.string());
  }
  std::string text = IsGzip(path) ? ReadGzip(path) : ReadPlain(path);
  try {
    return ParseCorpus(text, label);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

Vocabulary BuildVocabulary(const std::vector<RawDocument>& docs,
                           const PreprocessConfig& cfg) {
  cfg.Validate();
  // Tally everything first; the frequency floor needs pooled totals.
  Vocabulary all;
  for (const RawDocument& doc : docs) {
    for (const std::string& tok : doc.tokens) {
      std::string form = cfg.lowercase ? AsciiLower(tok) : tok;
      if (cfg.stopwords.count(form) > 0) continue;
      all.AddCount(all.Add(form), doc.label);
    }
  }
  Vocabulary vocab;
  for (std::size_t id = 0; id < all.size(); ++id) {
    const WordFrequency& f = all.Frequency(static_cast<WordId>(id));
    const std::int64_t pooled = f.pooled();
    bool drop = cfg.comparator == FloorComparator::kStrictlyBelow
                    ? pooled < cfg.min_freq_floor
                    : pooled <= cfg.min_freq_floor;
    if (drop) continue;
    WordId kept = vocab.Add(all.Word(static_cast<WordId>(id)));
    vocab.AddCount(kept, CorpusLabel::kReference, f.reference);
    vocab.AddCount(kept, CorpusLabel::kFocus, f.focus);
  }
  return vocab;
}

std::vector<PseudoDocument> FilterTokens(const std::vector<RawDocument>& docs,
                                         const Vocabulary& vocab,
                                         const PreprocessConfig& cfg) {
  std::vector<PseudoDocument> out;
  out.reserve(docs.size());
  for (const RawDocument& doc : docs) {
    PseudoDocument pd;
    pd.label = doc.label;
    pd.tokens.reserve(doc.tokens.size());
    for (const std::string& tok : doc.tokens) {
      WordId id = cfg.lowercase ? vocab.Find(AsciiLower(tok)) : vocab.Find(tok);
      if (id != kUnknownWord) pd.tokens.push_back(id);
    }
    if (pd.tokens.empty()) continue;
    pd.id = static_cast<std::int64_t>(out.size());
    out.push_back(std::move(pd));
  }
  return out;
}

std::vector<PseudoDocument> PoolCorpora(
    const std::vector<PseudoDocument>& ref_docs,
    const std::vector<PseudoDocument>& focus_docs, std::size_t vocab_size) {
  std::vector<PseudoDocument> pooled;
  pooled.reserve(ref_docs.size() + focus_docs.size());
  for (const auto* part : {&ref_docs, &focus_docs}) {
    for (const PseudoDocument& doc : *part) {
      for (WordId w : doc.tokens) {
        if (w < 0 || static_cast<std::size_t>(w) >= vocab_size) {
          throw InvariantViolation("document " + std::to_string(doc.id) +
                                   " has word id " + std::to_string(w) +
                                   " outside vocabulary of size " +
                                   std::to_string(vocab_size));
        }
      }
      PseudoDocument copy = doc;
      copy.id = static_cast<std::int64_t>(pooled.size());
      pooled.push_back(std::move(copy));
    }
  }
  return pooled;
}

std::unordered_set<std::string> LoadWordList(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open word list: " + path.string());
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    auto tokens = SplitWhitespace(line);
    if (tokens.empty() || tokens[0][0] == '#') continue;
    words.insert(tokens[0]);
  }
  return words;
}

std::vector<std::string> LoadTargets(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open targets file: " + path.string());
  std::vector<std::string> targets;
  std::string line;
  while (std::getline(in, line)) {
    auto tokens = SplitWhitespace(line);
    if (tokens.empty()) continue;
    targets.push_back(tokens[0]);
  }
  return targets;
}

}  // namespace senseshift
