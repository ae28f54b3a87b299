#pragma once

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace paramine {

// Back-off language model with interpolated absolute discounting:
//
//   p_k(w | h) = max(c(h w) - d, 0) / c(h) + d N1+(h) / c(h) * p_{k-1}(w | h')
//
// where h' drops the oldest token and N1+(h) is the number of distinct
// continuations of h. The unigram level interpolates with a uniform
// distribution over the predictable vocabulary (observed types plus <unk>).
// Training tokens seen fewer than twice are mapped to <unk>. Sentences are
// padded with <s> context markers and predict a final </s>.
class NgramLM {
 public:
  static constexpr const char* kUnknown = "<unk>";
  static constexpr const char* kBos = "<s>";
  static constexpr const char* kEos = "</s>";
  static constexpr int kUnkMinCount = 2;

  static NgramLM train(const std::vector<std::vector<std::string>>& sentences, int order,
                       double discount);

  int order() const { return order_; }
  double discount() const { return discount_; }

  // Natural-log probability of one token given up to order-1 context tokens.
  // Tokens outside the model vocabulary are scored as <unk>.
  double log_prob(const std::vector<std::string>& context, const std::string& token) const;
  double prob(const std::vector<std::string>& context, const std::string& token) const;

  // Sum of log_prob over the padded sentence, including the </s> transition.
  double sentence_log_prob(const std::vector<std::string>& tokens) const;

  // exp(-sentence_log_prob / (|tokens| + 1))
  double perplexity(const std::vector<std::string>& tokens) const;

  // Every token the model can predict, sorted; includes <unk> and </s>.
  std::vector<std::string> predictable_tokens() const;

  // All observed contexts of every length 0..order-1, for normalization checks.
  std::vector<std::vector<std::string>> observed_contexts() const;

  void save(const std::string& path) const;
  static NgramLM load(const std::string& path);

 private:
  NgramLM() = default;

  std::string map_token(const std::string& token) const;

  int order_ = 3;
  double discount_ = 0.75;
  // level k (1-based) tables; keys are tokens joined with '\x1f'
  std::vector<std::unordered_map<std::string, double>> ln_prob_;     // k-gram -> ln p
  std::vector<std::unordered_map<std::string, double>> ln_backoff_;  // k-token context -> ln alpha
  std::unordered_set<std::string> vocab_;                            // predictable tokens
};

}  // namespace paramine
