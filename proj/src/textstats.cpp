#include "paramine/textstats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <unordered_set>

#include "paramine/errors.hpp"
#include "paramine/serialize.hpp"

namespace paramine {

namespace {

size_t codepoint_count(const std::string& s) {
  size_t n = 0;
  for (char c : s)
    if ((static_cast<unsigned char>(c) & 0xc0u) != 0x80u) ++n;
  return n;
}

}  // namespace

std::string ngram_key(const std::vector<std::string>& tokens, size_t start, int n) {
  std::string key = tokens[start];
  for (int k = 1; k < n; ++k) {
    key.push_back('\x1f');
    key += tokens[start + static_cast<size_t>(k)];
  }
  return key;
}

NgramCounts ngram_counts(const std::vector<std::string>& tokens, int n) {
  if (n < 1) throw ArgumentError("ngram_counts: order must be >= 1");
  NgramCounts out;
  out.order = n;
  add_ngram_counts(out, tokens);
  return out;
}

void add_ngram_counts(NgramCounts& acc, const std::vector<std::string>& tokens) {
  const int n = acc.order;
  if (tokens.size() < static_cast<size_t>(n)) return;
  for (size_t i = 0; i + static_cast<size_t>(n) <= tokens.size(); ++i) {
    ++acc.counts[ngram_key(tokens, i, n)];
    ++acc.total;
  }
}

double entropy_bits(const NgramCounts& counts) {
  if (counts.total == 0) return 0.0;
  // Summation order is fixed by the count multiset, not the hash layout, so
  // equal distributions produce bit-identical entropies.
  std::vector<long long> values;
  values.reserve(counts.counts.size());
  for (const auto& [key, count] : counts.counts) values.push_back(count);
  std::sort(values.begin(), values.end(), std::greater<long long>());
  const double total = static_cast<double>(counts.total);
  double h = 0.0;
  for (long long count : values) {
    double p = static_cast<double>(count) / total;
    h -= p * std::log2(p);
  }
  return h < 0 ? 0.0 : h;
}

double repetition_rate(const std::vector<std::string>& tokens, int n, int min_chars) {
  if (n < 1) throw ArgumentError("repetition_rate: order must be >= 1");
  std::unordered_set<std::string> seen;
  long long items = 0, repeats = 0;
  if (n == 1) {
    for (const auto& t : tokens) {
      if (codepoint_count(t) < static_cast<size_t>(min_chars)) continue;
      ++items;
      if (!seen.insert(t).second) ++repeats;
    }
  } else {
    if (tokens.size() >= static_cast<size_t>(n)) {
      for (size_t i = 0; i + static_cast<size_t>(n) <= tokens.size(); ++i) {
        ++items;
        if (!seen.insert(ngram_key(tokens, i, n)).second) ++repeats;
      }
    }
  }
  return items == 0 ? 0.0 : static_cast<double>(repeats) / static_cast<double>(items);
}

double IdfTable::lookup(const std::string& token) const {
  auto it = idf.find(lowercase_token(token));
  return it == idf.end() ? default_idf : it->second;
}

void IdfTable::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write idf table: " + path);
  out << "docs\t" << doc_count << '\n';
  std::map<std::string, double> sorted(idf.begin(), idf.end());
  for (const auto& [token, value] : sorted) out << token << '\t' << format_double(value) << '\n';
}

IdfTable IdfTable::load(const std::string& path) {
  IdfTable table;
  auto lines = read_lines(path);
  if (lines.empty()) throw DataError("idf table is empty: " + path);
  auto header = split_on(lines[0], '\t');
  if (header.size() != 2 || header[0] != "docs")
    throw DataError("idf table: bad header in " + path);
  table.doc_count = parse_int(header[1], "idf doc count");
  table.default_idf = std::log(static_cast<double>(table.doc_count) + 1.0);
  for (size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto cols = split_on(lines[i], '\t');
    if (cols.size() != 2) throw DataError("idf table: bad line " + std::to_string(i + 1));
    table.idf[cols[0]] = parse_double(cols[1], "idf value");
  }
  return table;
}

IdfTable build_idf(const std::vector<std::vector<std::string>>& documents) {
  if (documents.empty()) throw ArgumentError("build_idf: need at least one document");
  std::unordered_map<std::string, long long> df;
  std::unordered_set<std::string> in_doc;
  for (const auto& doc : documents) {
    in_doc.clear();
    for (const auto& token : doc) in_doc.insert(lowercase_token(token));
    for (const auto& token : in_doc) ++df[token];
  }
  IdfTable table;
  table.doc_count = static_cast<long long>(documents.size());
  const double n1 = static_cast<double>(table.doc_count) + 1.0;
  table.default_idf = std::log(n1);
  for (const auto& [token, count] : df)
    table.idf[token] = std::log(n1 / (static_cast<double>(count) + 1.0));
  return table;
}

double avg_idf(const std::vector<std::string>& tokens, const IdfTable& table) {
  if (tokens.empty()) throw ArgumentError("avg_idf: empty token sequence");
  double sum = 0.0;
  for (const auto& t : tokens) sum += table.lookup(t);
  return sum / static_cast<double>(tokens.size());
}

double ngram_overlap(const std::vector<std::string>& ref, const std::vector<std::string>& trans,
                     int n) {
  if (n < 1) throw ArgumentError("ngram_overlap: order must be >= 1");
  NgramCounts a = ngram_counts(ref, n);
  NgramCounts b = ngram_counts(trans, n);
  if (a.total == 0 || b.total == 0) return 0.0;
  long long shared = 0;
  const NgramCounts& small = a.counts.size() <= b.counts.size() ? a : b;
  const NgramCounts& large = a.counts.size() <= b.counts.size() ? b : a;
  for (const auto& [key, count] : small.counts) {
    auto it = large.counts.find(key);
    if (it != large.counts.end()) shared += std::min(count, it->second);
  }
  return static_cast<double>(shared) / static_cast<double>(std::min(a.total, b.total));
}

double smoothed_bleu(const std::vector<std::string>& ref, const std::vector<std::string>& trans) {
  if (ref.empty() || trans.empty()) throw ArgumentError("smoothed_bleu: empty sentence");
  constexpr int kMaxOrder = 4;
  double log_prec_sum = 0.0;
  for (int n = 1; n <= kMaxOrder; ++n) {
    NgramCounts rc = ngram_counts(ref, n);
    NgramCounts tc = ngram_counts(trans, n);
    long long matches = 0;
    for (const auto& [key, count] : tc.counts) {
      auto it = rc.counts.find(key);
      if (it != rc.counts.end()) matches += std::min(count, it->second);
    }
    double p = (static_cast<double>(matches) + 1.0) / (static_cast<double>(tc.total) + 1.0);
    log_prec_sum += std::log(p);
  }
  const double r = static_cast<double>(ref.size());
  const double c = static_cast<double>(trans.size());
  double bp = std::min(1.0, std::exp(1.0 - (r + 1.0) / (c + 1.0)));
  return bp * std::exp(log_prec_sum / kMaxOrder);
}

namespace {

struct GroupAccum {
  NgramCounts ref_uni{1}, ref_tri{3}, trans_uni{1}, trans_tri{3};
  double rep_ref_uni = 0, rep_ref_tri = 0, rep_trans_uni = 0, rep_trans_tri = 0;
  long long pairs = 0;

  void add_pair(const SentencePair& p) {
    add_ngram_counts(ref_uni, p.reference);
    add_ngram_counts(ref_tri, p.reference);
    add_ngram_counts(trans_uni, p.translation);
    add_ngram_counts(trans_tri, p.translation);
    rep_ref_uni += repetition_rate(p.reference, 1, 3);
    rep_ref_tri += repetition_rate(p.reference, 3, 0);
    rep_trans_uni += repetition_rate(p.translation, 1, 3);
    rep_trans_tri += repetition_rate(p.translation, 3, 0);
    ++pairs;
  }

  void merge(const GroupAccum& o) {
    for (const auto& [k, v] : o.ref_uni.counts) ref_uni.counts[k] += v;
    ref_uni.total += o.ref_uni.total;
    for (const auto& [k, v] : o.ref_tri.counts) ref_tri.counts[k] += v;
    ref_tri.total += o.ref_tri.total;
    for (const auto& [k, v] : o.trans_uni.counts) trans_uni.counts[k] += v;
    trans_uni.total += o.trans_uni.total;
    for (const auto& [k, v] : o.trans_tri.counts) trans_tri.counts[k] += v;
    trans_tri.total += o.trans_tri.total;
    rep_ref_uni += o.rep_ref_uni;
    rep_ref_tri += o.rep_ref_tri;
    rep_trans_uni += o.rep_trans_uni;
    rep_trans_tri += o.rep_trans_tri;
    pairs += o.pairs;
  }

  DiffRow row(const std::string& lang, const std::string& source) const {
    DiffRow r;
    r.lang_pair = lang;
    r.source = source;
    r.pair_count = pairs;
    r.d_entropy_uni = entropy_bits(ref_uni) - entropy_bits(trans_uni);
    r.d_entropy_tri = entropy_bits(ref_tri) - entropy_bits(trans_tri);
    const double n = static_cast<double>(pairs);
    r.d_repetition_uni = (rep_ref_uni - rep_trans_uni) / n;
    r.d_repetition_tri = (rep_ref_tri - rep_trans_tri) / n;
    return r;
  }
};

using GroupKey = std::pair<std::string, std::string>;

}  // namespace

std::vector<DiffRow> corpus_diff_report(const PairCorpus& corpus, int threads) {
  if (corpus.empty()) throw ArgumentError("corpus_diff_report: empty corpus");

  // Fixed-size chunks accumulated serially in-chunk; chunks merged in order.
  // The floating-point reduction order is therefore independent of the
  // thread count and identical to the serial order.
  constexpr size_t kChunk = 256;
  const size_t nchunks = (corpus.size() + kChunk - 1) / kChunk;
  std::vector<std::map<GroupKey, GroupAccum>> chunk_groups(nchunks);

#pragma omp parallel for schedule(dynamic) num_threads(threads) if (threads > 1)
  for (long long ci = 0; ci < static_cast<long long>(nchunks); ++ci) {
    auto& groups = chunk_groups[static_cast<size_t>(ci)];
    const size_t begin = static_cast<size_t>(ci) * kChunk;
    const size_t end = std::min(begin + kChunk, corpus.size());
    for (size_t i = begin; i < end; ++i) {
      const SentencePair& p = corpus.pairs[i];
      groups[{p.lang_pair, p.source}].add_pair(p);
    }
  }

  std::map<GroupKey, GroupAccum> groups;
  GroupAccum all;
  for (auto& chunk : chunk_groups)
    for (auto& [key, acc] : chunk) groups[key].merge(acc);
  for (auto& [key, acc] : groups) all.merge(acc);

  std::vector<DiffRow> rows;
  rows.reserve(groups.size() + 1);
  for (const auto& [key, acc] : groups) rows.push_back(acc.row(key.first, key.second));
  rows.push_back(all.row("All", ""));
  return rows;
}

}  // namespace paramine
