// Copyright 2026 The Contfact Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Continual counting over letter streams: all substrings of length at most
// l, and minimal occurrences of all episodes of length at most l.
//
// Both reduce to one binary counter per query word. Words are indexed by
// length first, then lexicographically by letter index: for U = {a, b} and
// l = 2 the order is a, b, aa, ab, ba, bb.

#ifndef CONTFACT_SEQUENCES_H_
#define CONTFACT_SEQUENCES_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "contfact/factor.h"
#include "contfact/mechanisms.h"
#include "contfact/privacy.h"

namespace contfact {

// Decodes UTF-8 into code points. Throws std::invalid_argument on malformed
// input.
std::vector<char32_t> DecodeUtf8(std::string_view text);
std::string EncodeUtf8(std::span<const char32_t> code_points);

// Ordered set of distinct letters.
class Alphabet {
 public:
  // One letter per code point of `letters`; duplicates are rejected.
  explicit Alphabet(std::string_view letters);

  int size() const { return static_cast<int>(letters_.size()); }
  char32_t Letter(int index) const { return letters_.at(index); }
  // Throws std::invalid_argument for letters outside the alphabet.
  int IndexOf(char32_t letter) const;
  // Maps a UTF-8 stream to letter indices.
  std::vector<int> Encode(std::string_view text) const;
  std::string Decode(std::span<const int> word) const;

 private:
  std::vector<char32_t> letters_;
};

// Default bound on |U|^l for materialized query indices.
inline constexpr int64_t kDefaultQueryCap = int64_t{1} << 16;

// Bijection between words of length 1..l over [0, k) and [0, dim).
class QueryIndex {
 public:
  // Throws std::length_error when k^l exceeds `cap`.
  QueryIndex(int alphabet_size, int max_length,
             int64_t cap = kDefaultQueryCap);

  int alphabet_size() const { return k_; }
  int max_length() const { return ell_; }
  // sum_{i=1}^{l} k^i
  int64_t dim() const { return offsets_.back(); }
  int64_t Index(std::span<const int> word) const;
  std::vector<int> Word(int64_t index) const;

 private:
  int k_;
  int ell_;
  std::vector<int64_t> offsets_;  // offsets_[len - 1] = first index of len
};

// Substring counting. The step-t indicator marks the min(t, l) suffixes of
// the stream; each query word owns a binary counter on noise stream
// Index(word), calibrated with Sensitivity::Substring(l).
class SubstringCounter {
 public:
  SubstringCounter(const Alphabet& alphabet, int max_length,
                   const NoisePlan& plan, int64_t cap = kDefaultQueryCap,
                   std::shared_ptr<const FactorCoeffs> coeffs = nullptr);

  // Consumes one letter index and returns the released counts of every
  // query word.
  std::vector<double> Step(int letter);

  const QueryIndex& index() const { return index_; }
  int64_t t() const { return channels_.front().t(); }
  // Query indices set at the latest step.
  std::span<const int64_t> last_indicator() const { return last_; }
  std::span<const int64_t> true_counts() const { return counts_; }

 private:
  Alphabet alphabet_;
  QueryIndex index_;
  std::vector<FactorizationCounter> channels_;
  std::vector<int> recent_;  // last <= l letters, oldest first
  std::vector<int64_t> last_;
  std::vector<int64_t> counts_;
};

// Start position (1-based) of the minimal occurrence of `episode` ending at
// position t of `stream` (letters stream[0..t-1]), or 0 if none ends there.
// Takes the latest-start match ending at t and accepts it when the episode
// is not a subsequence of the same window without its last letter.
int64_t MinimalOccurrenceStart(std::span<const int> stream, int64_t t,
                               std::span<const int> episode);

// Episode counting over minimal occurrences. Each query word owns a binary
// counter calibrated with Sensitivity::Episode(|U|, l).
class EpisodeCounter {
 public:
  EpisodeCounter(const Alphabet& alphabet, int max_length,
                 const NoisePlan& plan, int64_t cap = kDefaultQueryCap,
                 std::shared_ptr<const FactorCoeffs> coeffs = nullptr);

  std::vector<double> Step(int letter);

  const QueryIndex& index() const { return index_; }
  int64_t t() const { return channels_.front().t(); }
  std::span<const int64_t> last_indicator() const { return last_; }
  std::span<const int64_t> true_counts() const { return counts_; }
  // Positions covered by at least one minimal-occurrence window.
  int64_t Support(int64_t query) const;

  struct Entry {
    int64_t query;
    double count;
  };
  // Released counts of the latest step restricted to episodes whose support
  // is at least `min_support`. The filter reads the raw stream and only
  // shapes what is reported; noise never depends on it.
  std::vector<Entry> Report(int64_t min_support) const;

 private:
  Alphabet alphabet_;
  QueryIndex index_;
  std::vector<FactorizationCounter> channels_;
  std::vector<int> stream_;
  std::vector<int64_t> last_;
  std::vector<int64_t> counts_;
  std::vector<int64_t> support_;
  std::vector<int64_t> covered_until_;  // last covered position per query
  std::vector<double> released_;
};

}  // namespace contfact

#endif  // CONTFACT_SEQUENCES_H_
