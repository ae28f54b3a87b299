#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace paramine {

struct TokenizerConfig {
  enum class Mode { kWhitespace, kPretokenized };
  bool lowercase = false;
  Mode mode = Mode::kWhitespace;
};

// Whitespace mode splits on runs of Unicode whitespace; pre-tokenized mode
// splits on single spaces only. Both are idempotent on their own output.
std::vector<std::string> tokenize(const std::string& text, const TokenizerConfig& tok);

std::string lowercase_token(const std::string& token);

// One reference/back-translation pair. `cost` is the per-token negative log
// likelihood reported by the system that produced the translation.
struct SentencePair {
  std::vector<std::string> reference;
  std::vector<std::string> translation;
  std::optional<double> cost;
  std::string lang_pair;
  std::string source;
  std::optional<long long> beam_rank;

  bool operator==(const SentencePair&) const = default;
};

struct PairCorpus {
  std::vector<SentencePair> pairs;

  size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
  bool operator==(const PairCorpus&) const = default;
};

struct LoadReport {
  size_t kept = 0;
  size_t skipped = 0;
  std::map<std::string, size_t> reasons;

  std::string to_json() const;
};

enum class CorpusFormat { kTsv, kJsonl };

CorpusFormat corpus_format_from_string(const std::string& name);

// Loads pairs in file order. Records violating the pair invariants are
// skipped and counted in the report; in strict mode any malformed record
// raises a DataError with its line number instead.
PairCorpus load_pairs(const std::string& path, CorpusFormat format, const TokenizerConfig& tok,
                      LoadReport* report = nullptr, bool strict = false);

void save_pairs(const std::string& path, const PairCorpus& corpus, CorpusFormat format);

class Vocabulary {
 public:
  static constexpr const char* kUnknown = "<unk>";

  Vocabulary();

  // Token ids are contiguous from 0; id 0 is reserved for <unk>.
  int add(const std::string& token);
  int lookup(const std::string& token) const;  // unk_id() when absent
  bool contains(const std::string& token) const;
  int unk_id() const { return 0; }
  int size() const { return static_cast<int>(tokens_.size()); }
  const std::string& token(int id) const { return tokens_[static_cast<size_t>(id)]; }
  const std::vector<std::string>& tokens() const { return tokens_; }

  std::vector<int> ids(const std::vector<std::string>& tokens) const;

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

// Tokens appearing at least min_count times across both sides, ordered by
// descending count then lexicographically, after the reserved <unk> slot.
Vocabulary build_vocab(const PairCorpus& corpus, int min_count);

// Uniform sample of n pairs without replacement; deterministic in (seed, corpus).
PairCorpus sample_fixed(const PairCorpus& corpus, size_t n, uint64_t seed);

}  // namespace paramine
