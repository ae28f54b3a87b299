#include "paramine/ngram_lm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "paramine/errors.hpp"
#include "paramine/serialize.hpp"

namespace paramine {

namespace {

constexpr char kSep = '\x1f';
constexpr double kArpaNoProb = -99.0;  // sentinel for context-only entries

std::string join_range(const std::vector<std::string>& tokens, size_t begin, size_t end) {
  std::string key;
  for (size_t i = begin; i < end; ++i) {
    if (i > begin) key.push_back(kSep);
    key += tokens[i];
  }
  return key;
}

std::vector<std::string> split_key(const std::string& key) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : key) {
    if (c == kSep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string NgramLM::map_token(const std::string& token) const {
  return vocab_.count(token) ? token : kUnknown;
}

NgramLM NgramLM::train(const std::vector<std::vector<std::string>>& sentences, int order,
                       double discount) {
  if (sentences.empty()) throw ArgumentError("train_lm: empty training set");
  if (order < 1) throw ArgumentError("train_lm: order must be >= 1");
  if (!(discount > 0.0 && discount < 1.0))
    throw ArgumentError("train_lm: discount must be in (0, 1)");

  NgramLM lm;
  lm.order_ = order;
  lm.discount_ = discount;

  // Raw unigram counts decide the <unk> mapping.
  std::unordered_map<std::string, long long> raw;
  for (const auto& sent : sentences)
    for (const auto& t : sent) ++raw[t];

  auto mapped_token = [&](const std::string& t) -> std::string {
    auto it = raw.find(t);
    return (it != raw.end() && it->second >= kUnkMinCount && t != kBos && t != kEos) ? t : kUnknown;
  };

  // k-gram counts for k = 1..order over padded sentences. Unigrams exclude <s>.
  std::vector<std::unordered_map<std::string, long long>> counts(
      static_cast<size_t>(order) + 1);
  for (const auto& sent : sentences) {
    std::vector<std::string> seq;
    seq.reserve(sent.size() + static_cast<size_t>(order));
    for (int k = 1; k < order; ++k) seq.push_back(kBos);
    for (const auto& t : sent) seq.push_back(mapped_token(t));
    seq.push_back(kEos);
    const size_t pad = static_cast<size_t>(order - 1);
    for (size_t pos = pad; pos < seq.size(); ++pos) {
      for (int k = 1; k <= order; ++k) {
        if (pos + 1 < static_cast<size_t>(k)) break;
        ++counts[static_cast<size_t>(k)][join_range(seq, pos + 1 - static_cast<size_t>(k), pos + 1)];
      }
    }
  }

  // Predictable vocabulary: observed unigram types plus <unk>.
  for (const auto& [key, c] : counts[1]) lm.vocab_.insert(key);
  lm.vocab_.insert(kUnknown);

  lm.ln_prob_.assign(static_cast<size_t>(order) + 1, {});
  lm.ln_backoff_.assign(static_cast<size_t>(order) + 1, {});

  // Unigram level, interpolated with the uniform base distribution.
  {
    long long total = 0;
    for (const auto& [key, c] : counts[1]) total += c;
    const double n = static_cast<double>(total);
    const double types = static_cast<double>(counts[1].size());
    const double uniform = 1.0 / static_cast<double>(lm.vocab_.size());
    const double backoff_mass = discount * types / n;
    for (const auto& w : lm.vocab_) {
      auto it = counts[1].find(w);
      const double c = it == counts[1].end() ? 0.0 : static_cast<double>(it->second);
      const double p = std::max(c - discount, 0.0) / n + backoff_mass * uniform;
      lm.ln_prob_[1][w] = std::log(p);
    }
  }

  // Higher levels. Context statistics derive from the level-k counts.
  for (int k = 2; k <= order; ++k) {
    std::unordered_map<std::string, long long> ctx_total;
    std::unordered_map<std::string, long long> ctx_types;
    std::vector<std::pair<const std::string*, long long>> grams;
    grams.reserve(counts[static_cast<size_t>(k)].size());
    for (const auto& [key, c] : counts[static_cast<size_t>(k)]) {
      const size_t cut = key.rfind(kSep);
      const std::string ctx = key.substr(0, cut);
      ctx_total[ctx] += c;
      ++ctx_types[ctx];
      grams.emplace_back(&key, c);
    }
    for (const auto& [ctx, total] : ctx_total) {
      lm.ln_backoff_[static_cast<size_t>(k) - 1][ctx] =
          std::log(discount * static_cast<double>(ctx_types[ctx]) / static_cast<double>(total));
    }
    for (const auto& [key_ptr, c] : grams) {
      const std::string& key = *key_ptr;
      const size_t cut = key.rfind(kSep);
      const std::string ctx = key.substr(0, cut);
      const std::string w = key.substr(cut + 1);
      const double total = static_cast<double>(ctx_total[ctx]);
      const double alpha = std::exp(lm.ln_backoff_[static_cast<size_t>(k) - 1][ctx]);
      // Lower-order probability of w given the shortened context. The
      // (k-1)-gram is observed whenever the k-gram is, so the direct lookup
      // never misses except through the <s> prefix, handled by log_prob.
      const size_t drop = ctx.find(kSep);
      std::vector<std::string> sub_ctx =
          drop == std::string::npos ? std::vector<std::string>{}
                                    : split_key(ctx.substr(drop + 1));
      const double p_low = std::exp(lm.log_prob_raw(sub_ctx, w));
      const double p =
          std::max(static_cast<double>(c) - discount, 0.0) / total + alpha * p_low;
      lm.ln_prob_[static_cast<size_t>(k)][key] = std::log(p);
    }
  }
  return lm;
}

double NgramLM::log_prob(const std::vector<std::string>& context,
                         const std::string& token) const {
  std::vector<std::string> ctx;
  const size_t max_ctx = static_cast<size_t>(order_ - 1);
  const size_t start = context.size() > max_ctx ? context.size() - max_ctx : 0;
  for (size_t i = start; i < context.size(); ++i)
    ctx.push_back(context[i] == kBos ? std::string(kBos) : map_token(context[i]));
  return log_prob_raw(ctx, map_token(token));
}

double NgramLM::prob(const std::vector<std::string>& context, const std::string& token) const {
  return std::exp(log_prob(context, token));
}

double NgramLM::sentence_log_prob(const std::vector<std::string>& tokens) const {
  if (tokens.empty()) throw ArgumentError("sentence_log_prob: empty sentence");
  std::vector<std::string> seq;
  for (int k = 1; k < order_; ++k) seq.push_back(kBos);
  for (const auto& t : tokens) seq.push_back(map_token(t));
  seq.push_back(kEos);
  const size_t pad = static_cast<size_t>(order_ - 1);
  double ln_sum = 0.0;
  for (size_t pos = pad; pos < seq.size(); ++pos) {
    std::vector<std::string> ctx(seq.begin() + static_cast<long>(pos - pad),
                                 seq.begin() + static_cast<long>(pos));
    ln_sum += log_prob_raw(ctx, seq[pos]);
  }
  return ln_sum;
}

double NgramLM::perplexity(const std::vector<std::string>& tokens) const {
  if (tokens.empty()) throw ArgumentError("perplexity: empty sentence");
  const double t = static_cast<double>(tokens.size()) + 1.0;
  return std::exp(-sentence_log_prob(tokens) / t);
}

std::vector<std::string> NgramLM::predictable_tokens() const {
  std::vector<std::string> out(vocab_.begin(), vocab_.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<std::string>> NgramLM::observed_contexts() const {
  std::vector<std::vector<std::string>> out;
  out.push_back({});
  for (size_t k = 1; k < ln_backoff_.size(); ++k)
    for (const auto& [ctx, alpha] : ln_backoff_[k]) out.push_back(split_key(ctx));
  return out;
}

void NgramLM::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write language model: " + path);
  constexpr double kLn10 = 2.302585092994045684;

  // Every entry that needs a line at level k: observed k-grams and any
  // k-token context of level k+1 (those get the -99 placeholder).
  std::vector<std::map<std::string, std::pair<bool, double>>> entries(ln_prob_.size());
  for (size_t k = 1; k < ln_prob_.size(); ++k)
    for (const auto& [key, lp] : ln_prob_[k]) entries[k][key] = {true, lp};
  for (size_t k = 1; k < ln_backoff_.size(); ++k)
    for (const auto& [ctx, a] : ln_backoff_[k])
      entries[k].try_emplace(ctx, false, 0.0);

  out << "# order=" << order_ << " interpolated-absolute-discount d=" << format_double(discount_)
      << '\n';
  out << "\\data\\\n";
  for (size_t k = 1; k < entries.size(); ++k)
    out << "ngram " << k << '=' << entries[k].size() << '\n';
  out << '\n';
  for (size_t k = 1; k < entries.size(); ++k) {
    out << '\\' << k << "-grams:\n";
    for (const auto& [key, entry] : entries[k]) {
      const auto& [has_prob, lp] = entry;
      out << (has_prob ? format_double(lp / kLn10) : std::to_string(kArpaNoProb));
      out << '\t';
      std::string spaced = key;
      std::replace(spaced.begin(), spaced.end(), kSep, ' ');
      out << spaced;
      auto bo = ln_backoff_[k].find(key);
      if (bo != ln_backoff_[k].end()) out << '\t' << format_double(bo->second / kLn10);
      out << '\n';
    }
    out << '\n';
  }
  out << "\\end\\\n";
}

NgramLM NgramLM::load(const std::string& path) {
  constexpr double kLn10 = 2.302585092994045684;
  auto lines = read_lines(path);
  NgramLM lm;
  lm.ln_prob_.clear();
  lm.ln_backoff_.clear();

  size_t i = 0;
  int current_level = 0;
  bool in_grams = false;
  std::vector<size_t> declared;
  for (; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty() || line[0] == '#') continue;
    if (line == "\\data\\") continue;
    if (line == "\\end\\") break;
    if (line.rfind("ngram ", 0) == 0) {
      auto eq = line.find('=');
      if (eq == std::string::npos) throw DataError("lm: bad ngram count line: " + line);
      declared.push_back(static_cast<size_t>(parse_int(line.substr(eq + 1), "ngram count")));
      continue;
    }
    if (line.size() > 2 && line[0] == '\\' && line.find("-grams:") != std::string::npos) {
      current_level = static_cast<int>(parse_int(line.substr(1, line.find('-') - 1), "level"));
      in_grams = true;
      while (lm.ln_prob_.size() <= static_cast<size_t>(current_level)) {
        lm.ln_prob_.emplace_back();
        lm.ln_backoff_.emplace_back();
      }
      continue;
    }
    if (!in_grams || current_level < 1) throw DataError("lm: unexpected line: " + line);
    auto cols = split_on(line, '\t');
    if (cols.size() < 2 || cols.size() > 3) throw DataError("lm: bad entry line: " + line);
    const double lp10 = parse_double(cols[0], "lm prob");
    std::string key = cols[1];
    std::replace(key.begin(), key.end(), ' ', kSep);
    if (lp10 != kArpaNoProb)
      lm.ln_prob_[static_cast<size_t>(current_level)][key] = lp10 * kLn10;
    if (cols.size() == 3)
      lm.ln_backoff_[static_cast<size_t>(current_level)][key] =
          parse_double(cols[2], "lm backoff") * kLn10;
  }
  if (lm.ln_prob_.size() < 2) throw DataError("lm: no n-gram sections found in " + path);
  lm.order_ = static_cast<int>(lm.ln_prob_.size()) - 1;
  for (const auto& [w, lp] : lm.ln_prob_[1])
    if (w != kBos) lm.vocab_.insert(w);
  lm.vocab_.insert(kUnknown);
  (void)declared;
  return lm;
}

}  // namespace paramine
