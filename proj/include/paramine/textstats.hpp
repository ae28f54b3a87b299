#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "paramine/corpus.hpp"

namespace paramine {

// Contiguous n-gram counts. Keys are the n tokens joined with '\x1f'.
struct NgramCounts {
  int order = 1;
  long long total = 0;
  std::unordered_map<std::string, long long> counts;
};

std::string ngram_key(const std::vector<std::string>& tokens, size_t start, int n);

NgramCounts ngram_counts(const std::vector<std::string>& tokens, int n);

// Pools another sequence's n-grams into existing counts (same order).
void add_ngram_counts(NgramCounts& acc, const std::vector<std::string>& tokens);

// Shannon entropy in bits of the empirical n-gram distribution; 0 when empty.
double entropy_bits(const NgramCounts& counts);

// Fraction of n-gram occurrences that repeat an earlier occurrence in the
// sentence. For n = 1, only tokens with at least min_chars characters
// (codepoints) are considered; higher orders use every n-gram.
double repetition_rate(const std::vector<std::string>& tokens, int n, int min_chars);

struct IdfTable {
  std::unordered_map<std::string, double> idf;
  long long doc_count = 0;
  double default_idf = 0;  // ln(N + 1), for unseen tokens

  double lookup(const std::string& token) const;
  void save(const std::string& path) const;
  static IdfTable load(const std::string& path);
};

// idf(w) = ln((N + 1) / (df(w) + 1)); tokens lowercased before counting.
IdfTable build_idf(const std::vector<std::vector<std::string>>& documents);

double avg_idf(const std::vector<std::string>& tokens, const IdfTable& table);

// Clipped shared n-gram occurrences divided by the smaller side's total;
// 0 when either side has no n-grams of this order.
double ngram_overlap(const std::vector<std::string>& ref, const std::vector<std::string>& trans,
                     int n);

// Smoothed sentence-level BLEU, max order 4: every precision gets add-one
// smoothing, p_n = (matches_n + 1) / (candidates_n + 1), and the brevity
// penalty is smoothed as min(1, exp(1 - (r + 1) / (c + 1))).
double smoothed_bleu(const std::vector<std::string>& ref, const std::vector<std::string>& trans);

// Per-(lang_pair, source) reference-minus-translation deltas, plus a pooled
// "All" row. Entropies use pooled counts per group; repetition uses the mean
// per-sentence rate. Negative repetition deltas mean translations repeat more.
struct DiffRow {
  std::string lang_pair;
  std::string source;
  long long pair_count = 0;
  double d_entropy_uni = 0;
  double d_entropy_tri = 0;
  double d_repetition_uni = 0;
  double d_repetition_tri = 0;
};

std::vector<DiffRow> corpus_diff_report(const PairCorpus& corpus, int threads = 1);

}  // namespace paramine
