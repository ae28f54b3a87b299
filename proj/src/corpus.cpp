#include "paramine/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "paramine/errors.hpp"
#include "paramine/rng.hpp"
#include "paramine/serialize.hpp"

namespace paramine {

using json = nlohmann::json;

namespace {

// Decodes one UTF-8 codepoint starting at s[i]; advances i past it.
// Malformed bytes are consumed one at a time and returned verbatim.
uint32_t decode_utf8(const std::string& s, size_t& i) {
  unsigned char b0 = static_cast<unsigned char>(s[i]);
  int extra;
  uint32_t cp;
  if ((b0 & 0x80u) == 0) {
    ++i;
    return b0;
  } else if ((b0 & 0xe0u) == 0xc0u) {
    extra = 1;
    cp = b0 & 0x1fu;
  } else if ((b0 & 0xf0u) == 0xe0u) {
    extra = 2;
    cp = b0 & 0x0fu;
  } else if ((b0 & 0xf8u) == 0xf0u) {
    extra = 3;
    cp = b0 & 0x07u;
  } else {
    ++i;  // stray continuation byte, pass through
    return b0;
  }
  if (i + static_cast<size_t>(extra) >= s.size()) {
    ++i;  // truncated sequence
    return b0;
  }
  size_t start = i++;
  for (int k = 0; k < extra; ++k) {
    unsigned char b = static_cast<unsigned char>(s[i]);
    if ((b & 0xc0u) != 0x80u) {
      i = start + 1;
      return b0;
    }
    cp = (cp << 6) | (b & 0x3fu);
    ++i;
  }
  return cp;
}

bool is_unicode_space(uint32_t cp) {
  switch (cp) {
    case 0x09: case 0x0a: case 0x0b: case 0x0c: case 0x0d: case 0x20:
    case 0x85: case 0xa0: case 0x1680:
    case 0x2028: case 0x2029: case 0x202f: case 0x205f: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200a;
  }
}

}  // namespace

std::string lowercase_token(const std::string& token) {
  std::string out = token;
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

std::vector<std::string> tokenize(const std::string& text, const TokenizerConfig& tok) {
  std::vector<std::string> out;
  if (tok.mode == TokenizerConfig::Mode::kPretokenized) {
    std::string cur;
    for (char c : text) {
      if (c == ' ') {
        if (!cur.empty()) out.push_back(std::move(cur));
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
  } else {
    size_t i = 0;
    std::string cur;
    while (i < text.size()) {
      size_t start = i;
      uint32_t cp = decode_utf8(text, i);
      if (is_unicode_space(cp)) {
        if (!cur.empty()) out.push_back(std::move(cur));
        cur.clear();
      } else {
        cur.append(text, start, i - start);
      }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
  }
  if (tok.lowercase)
    for (auto& t : out) t = lowercase_token(t);
  return out;
}

std::string LoadReport::to_json() const {
  json j;
  j["kept"] = kept;
  j["skipped"] = skipped;
  j["reasons"] = json::object();
  for (const auto& [reason, count] : reasons) j["reasons"][reason] = count;
  return j.dump();
}

CorpusFormat corpus_format_from_string(const std::string& name) {
  if (name == "tsv") return CorpusFormat::kTsv;
  if (name == "jsonl") return CorpusFormat::kJsonl;
  throw ArgumentError("unknown corpus format: " + name + " (expected tsv or jsonl)");
}

namespace {

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

struct RawRecord {
  std::string reference, translation;
  std::optional<double> cost;
  std::string lang_pair, source;
  std::optional<long long> beam_rank;
};

std::optional<RawRecord> parse_tsv_line(const std::string& line, std::string* error) {
  auto cols = split_on(line, '\t');
  if (cols.size() < 2) {
    *error = "fewer than 2 columns";
    return std::nullopt;
  }
  if (cols.size() > 6) {
    *error = "more than 6 columns";
    return std::nullopt;
  }
  RawRecord rec;
  rec.reference = cols[0];
  rec.translation = cols[1];
  try {
    if (cols.size() > 2 && !cols[2].empty()) rec.cost = parse_double(cols[2], "cost");
    if (cols.size() > 3) rec.lang_pair = cols[3];
    if (cols.size() > 4) rec.source = cols[4];
    if (cols.size() > 5 && !cols[5].empty()) rec.beam_rank = parse_int(cols[5], "beam_rank");
  } catch (const DataError& e) {
    *error = e.what();
    return std::nullopt;
  }
  return rec;
}

std::optional<RawRecord> parse_jsonl_line(const std::string& line, std::string* error) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    *error = "invalid json object";
    return std::nullopt;
  }
  RawRecord rec;
  const json* ref = j.contains("ref") ? &j["ref"] : (j.contains("reference") ? &j["reference"] : nullptr);
  const json* trans = j.contains("trans") ? &j["trans"] : (j.contains("translation") ? &j["translation"] : nullptr);
  if (!ref || !trans || !ref->is_string() || !trans->is_string()) {
    *error = "missing ref/trans string fields";
    return std::nullopt;
  }
  rec.reference = ref->get<std::string>();
  rec.translation = trans->get<std::string>();
  if (j.contains("cost")) {
    if (!j["cost"].is_number()) {
      *error = "cost is not a number";
      return std::nullopt;
    }
    rec.cost = j["cost"].get<double>();
  }
  if (j.contains("lang_pair")) rec.lang_pair = j["lang_pair"].get<std::string>();
  if (j.contains("source")) rec.source = j["source"].get<std::string>();
  if (j.contains("beam_rank")) {
    if (!j["beam_rank"].is_number_integer()) {
      *error = "beam_rank is not an integer";
      return std::nullopt;
    }
    rec.beam_rank = j["beam_rank"].get<long long>();
  }
  return rec;
}

}  // namespace

PairCorpus load_pairs(const std::string& path, CorpusFormat format, const TokenizerConfig& tok,
                      LoadReport* report, bool strict) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file: " + path);

  PairCorpus corpus;
  LoadReport local;
  LoadReport& rep = report ? *report : local;

  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::string error;
    std::optional<RawRecord> rec = format == CorpusFormat::kTsv ? parse_tsv_line(line, &error)
                                                                : parse_jsonl_line(line, &error);
    if (!rec) {
      if (strict) throw DataError(path + ":" + std::to_string(line_no) + ": " + error);
      ++rep.skipped;
      ++rep.reasons["malformed"];
      continue;
    }

    SentencePair pair;
    pair.reference = tokenize(rec->reference, tok);
    pair.translation = tokenize(rec->translation, tok);
    pair.cost = rec->cost;
    pair.lang_pair = rec->lang_pair;
    pair.source = rec->source;
    pair.beam_rank = rec->beam_rank;

    const char* reason = nullptr;
    if (pair.reference.empty())
      reason = "empty_reference";
    else if (pair.translation.empty())
      reason = "empty_translation";
    else if (pair.cost && (!std::isfinite(*pair.cost) || *pair.cost < 0))
      reason = "bad_cost";
    else if (pair.beam_rank && *pair.beam_rank < 0)
      reason = "bad_beam_rank";

    if (reason) {
      ++rep.skipped;
      ++rep.reasons[reason];
      continue;
    }
    ++rep.kept;
    corpus.pairs.push_back(std::move(pair));
  }
  return corpus;
}

void save_pairs(const std::string& path, const PairCorpus& corpus, CorpusFormat format) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write corpus file: " + path);

  for (const SentencePair& p : corpus.pairs) {
    if (format == CorpusFormat::kTsv) {
      std::vector<std::string> cols = {join_tokens(p.reference), join_tokens(p.translation),
                                       p.cost ? format_double(*p.cost) : "", p.lang_pair, p.source,
                                       p.beam_rank ? std::to_string(*p.beam_rank) : ""};
      while (cols.size() > 2 && cols.back().empty()) cols.pop_back();
      for (size_t i = 0; i < cols.size(); ++i) {
        if (i) out << '\t';
        out << cols[i];
      }
      out << '\n';
    } else {
      json j;
      j["ref"] = join_tokens(p.reference);
      j["trans"] = join_tokens(p.translation);
      if (p.cost) j["cost"] = *p.cost;
      if (!p.lang_pair.empty()) j["lang_pair"] = p.lang_pair;
      if (!p.source.empty()) j["source"] = p.source;
      if (p.beam_rank) j["beam_rank"] = *p.beam_rank;
      out << j.dump() << '\n';
    }
  }
}

Vocabulary::Vocabulary() { add(kUnknown); }

int Vocabulary::add(const std::string& token) {
  auto [it, inserted] = index_.try_emplace(token, static_cast<int>(tokens_.size()));
  if (inserted) tokens_.push_back(token);
  return it->second;
}

int Vocabulary::lookup(const std::string& token) const {
  auto it = index_.find(token);
  return it == index_.end() ? unk_id() : it->second;
}

bool Vocabulary::contains(const std::string& token) const { return index_.count(token) > 0; }

std::vector<int> Vocabulary::ids(const std::vector<std::string>& tokens) const {
  std::vector<int> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(lookup(t));
  return out;
}

Vocabulary build_vocab(const PairCorpus& corpus, int min_count) {
  if (min_count < 1) throw ArgumentError("build_vocab: min_count must be >= 1");
  std::unordered_map<std::string, long long> counts;
  for (const SentencePair& p : corpus.pairs) {
    for (const auto& t : p.reference) ++counts[t];
    for (const auto& t : p.translation) ++counts[t];
  }
  std::vector<std::pair<std::string, long long>> kept;
  for (auto& [token, count] : counts)
    if (count >= min_count && token != Vocabulary::kUnknown) kept.emplace_back(token, count);
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  Vocabulary vocab;
  for (const auto& [token, count] : kept) vocab.add(token);
  return vocab;
}

PairCorpus sample_fixed(const PairCorpus& corpus, size_t n, uint64_t seed) {
  if (n > corpus.size())
    throw ArgumentError("sample_fixed: n=" + std::to_string(n) + " exceeds corpus size " +
                        std::to_string(corpus.size()));
  std::vector<size_t> idx(corpus.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  Rng rng(seed);
  PairCorpus out;
  out.pairs.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    size_t j = i + rng.index(idx.size() - i);
    std::swap(idx[i], idx[j]);
    out.pairs.push_back(corpus.pairs[idx[i]]);
  }
  return out;
}

}  // namespace paramine
