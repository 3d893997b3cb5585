#pragma once

#include <algorithm>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "spl/error.hpp"
#include "spl/fixedset.hpp"

namespace spl {

using Token = std::string;
using TokenSeq = std::vector<Token>;
/// An n-gram context; the start-of-sequence marker may appear only first.
using Context = std::vector<Token>;

inline const Token kSentenceStart = "<s>";

inline TokenSeq tokenize(const std::string& line) {
  TokenSeq out;
  std::istringstream in(line);
  for (Token t; in >> t;) out.push_back(t);
  return out;
}

inline std::string join(const TokenSeq& s, const char* sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += sep;
    out += s[i];
  }
  return out;
}

/// Corpus file: UTF-8, one whitespace-tokenised sentence per line; blank lines
/// are ignored.
inline std::vector<TokenSeq> read_corpus(std::istream& in) {
  std::vector<TokenSeq> corpus;
  for (std::string line; std::getline(in, line);) {
    auto t = tokenize(line);
    if (!t.empty()) corpus.push_back(std::move(t));
  }
  return corpus;
}

/// Successor structure over n-gram contexts (1 <= n <= max_order). Pairs
/// observed in the training corpus are tracked separately from pairs added
/// afterwards, so pruning can never delete trained structure.
class PredictionGraph {
 public:
  PredictionGraph() = default;
  explicit PredictionGraph(std::size_t max_order) : max_order_(max_order) {}

  std::size_t max_order() const { return max_order_; }
  const std::set<Token>& vocabulary() const { return vocab_; }
  const std::map<Context, std::set<Token>>& successors() const { return succ_; }
  const std::vector<TokenSeq>& training() const { return training_; }

  bool knows(const Token& t) const { return vocab_.count(t) != 0; }

  const std::set<Token>& successors_of(const Context& c) const {
    static const std::set<Token> kEmpty;
    auto it = succ_.find(c);
    return it == succ_.end() ? kEmpty : it->second;
  }

  bool is_trained(const Context& c, const Token& next) const { return trained_.count({c, next}) != 0; }

  /// Adds one training sentence: every context of length 1..max_order that is
  /// followed by a token, plus start-anchored contexts.
  void train(const TokenSeq& sentence) {
    if (sentence.empty()) return;
    training_.push_back(sentence);
    for (const auto& t : sentence) vocab_.insert(t);
    TokenSeq padded{kSentenceStart};
    padded.insert(padded.end(), sentence.begin(), sentence.end());
    for (std::size_t end = 1; end < padded.size(); ++end) {
      const Token& next = padded[end];
      for (std::size_t n = 1; n <= max_order_ && n <= end; ++n) {
        Context c(padded.begin() + static_cast<std::ptrdiff_t>(end - n), padded.begin() + static_cast<std::ptrdiff_t>(end));
        // the start marker only anchors contexts from the left
        if (std::find(c.begin() + 1, c.end(), kSentenceStart) != c.end()) continue;
        succ_[c].insert(next);
        trained_.insert({c, next});
      }
    }
  }

  /// Adds an association that did not come from training (e.g. an
  /// overgeneralised link).
  void add_link(const Context& c, const Token& next) {
    if (c.empty() || c.size() > max_order_) throw ContractError("context length out of range");
    for (const auto& t : c)
      if (t != kSentenceStart && !knows(t)) throw ContractError("unknown token " + t);
    if (!knows(next)) throw ContractError("unknown token " + next);
    succ_[c].insert(next);
  }

  /// Removes an untrained pair. Returns false (and leaves the graph alone)
  /// when the pair is absent or came from training.
  bool remove_link(const Context& c, const Token& next) {
    if (is_trained(c, next)) return false;
    auto it = succ_.find(c);
    if (it == succ_.end() || !it->second.erase(next)) return false;
    if (it->second.empty()) succ_.erase(it);
    return true;
  }

  /// Scenario-supplied association from words to fixed sets.
  std::map<Token, FixedSetId> token_to_fixedset;

 private:
  std::size_t max_order_ = 3;
  std::set<Token> vocab_;
  std::map<Context, std::set<Token>> succ_;
  std::set<std::pair<Context, Token>> trained_;
  std::vector<TokenSeq> training_;
};

inline PredictionGraph build_prediction_graph(const std::vector<TokenSeq>& corpus, std::size_t max_order) {
  if (max_order < 1) throw ContractError("max_order must be >= 1");
  if (corpus.empty()) throw ContractError("empty corpus");
  PredictionGraph g(max_order);
  for (const auto& s : corpus) g.train(s);
  return g;
}

/// Successors of the longest admissible suffix of `prefix` (its last
/// min(|prefix|, max_order) tokens). There is no back-off to shorter
/// contexts: an unseen context predicts nothing. The empty prefix predicts
/// sentence-initial tokens.
inline std::set<Token> predictions(const PredictionGraph& g, const TokenSeq& prefix) {
  if (prefix.empty()) return g.successors_of({kSentenceStart});
  const std::size_t n = std::min(prefix.size(), g.max_order());
  Context c(prefix.end() - static_cast<std::ptrdiff_t>(n), prefix.end());
  return g.successors_of(c);
}

struct ContinuityBreak {
  std::size_t pos;  ///< index of the last token of the offending context
  Context context;
  bool operator==(const ContinuityBreak&) const = default;
};

struct ContinuityVerdict {
  bool continuous = false;
  std::optional<ContinuityBreak> first_break;
  double coverage = 0.0;
  std::size_t checked = 0;
  std::vector<Token> unknown_tokens;
  /// Set when the verdict failed for a reason other than coverage.
  std::string note;
};

inline constexpr double kMaxUnknownFraction = 0.25;

/// Queries every contiguous subsequence whose length is in `orders` and which
/// does not end on the final token (a one-token sequence is checked as is). Subsequences are visited by end position,
/// then length, so `first_break` is the earliest point where a prediction is
/// lost. Unknown tokens are skipped (subsequences touching them are not
/// checked) while they make up at most a quarter of the sequence.
///
/// Continuous iff coverage >= required_coverage and there is no critical
/// break, i.e. no position at which every checked order came back empty.
inline ContinuityVerdict is_abstractly_continuous(const PredictionGraph& g, const TokenSeq& seq,
                                                  const std::set<std::size_t>& orders = {1, 2, 3},
                                                  double required_coverage = 0.9) {
  if (seq.empty()) throw ContractError("cannot check an empty sequence");
  if (!(required_coverage > 0.0 && required_coverage <= 1.0)) throw ContractError("required_coverage must be in (0,1]");
  for (auto o : orders)
    if (o < 1 || o > g.max_order()) throw ContractError("order " + std::to_string(o) + " outside 1..max_order");

  ContinuityVerdict v;
  std::vector<char> unknown(seq.size(), 0);
  for (std::size_t i = 0; i < seq.size(); ++i)
    if (!g.knows(seq[i])) {
      unknown[i] = 1;
      v.unknown_tokens.push_back(seq[i]);
    }
  if (static_cast<double>(v.unknown_tokens.size()) > kMaxUnknownFraction * static_cast<double>(seq.size())) {
    v.continuous = false;
    v.note = "too many unknown tokens";
    return v;
  }

  std::size_t nonempty = 0;
  bool critical = false;
  // the final token needs no successor, unless it is the only token
  const std::size_t last_end = seq.size() == 1 ? 1 : seq.size() - 1;
  for (std::size_t end = 0; end < last_end; ++end) {
    std::size_t at_pos = 0, empty_at_pos = 0;
    for (auto n : orders) {
      if (n > end + 1) continue;
      const std::size_t begin = end + 1 - n;
      bool skip = false;
      for (std::size_t i = begin; i <= end; ++i) skip = skip || unknown[i];
      if (skip) continue;
      Context c(seq.begin() + static_cast<std::ptrdiff_t>(begin), seq.begin() + static_cast<std::ptrdiff_t>(end + 1));
      ++v.checked;
      ++at_pos;
      if (!g.successors_of(c).empty()) {
        ++nonempty;
      } else {
        ++empty_at_pos;
        if (!v.first_break) v.first_break = ContinuityBreak{end, c};
      }
    }
    if (at_pos > 0 && empty_at_pos == at_pos) critical = true;
  }
  v.coverage = v.checked == 0 ? 1.0 : static_cast<double>(nonempty) / static_cast<double>(v.checked);
  v.continuous = v.coverage >= required_coverage && !critical;
  if (critical && v.coverage >= required_coverage) v.note = "all predictions lost at some position";
  return v;
}

inline nlohmann::json to_json(const ContinuityVerdict& v) {
  nlohmann::json j;
  j["continuous"] = v.continuous;
  j["coverage"] = v.coverage;
  if (v.first_break)
    j["first_break"] = {{"pos", v.first_break->pos}, {"context", v.first_break->context}};
  else
    j["first_break"] = nullptr;
  return j;
}

}  // namespace spl
