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

#include "contfact/sequences.h"

#include <algorithm>
#include <stdexcept>

namespace contfact {

namespace {

[[noreturn]] void BadUtf8(size_t pos) {
  throw std::invalid_argument("malformed UTF-8 at byte " +
                              std::to_string(pos));
}

std::vector<FactorizationCounter> MakeChannels(
    int64_t dim, const NoisePlan& plan,
    std::shared_ptr<const FactorCoeffs> coeffs) {
  if (!coeffs) {
    coeffs = std::make_shared<const FactorCoeffs>(
        FactorCoeffs::Build(plan.horizon));
  }
  std::vector<FactorizationCounter> channels;
  channels.reserve(dim);
  for (int64_t q = 0; q < dim; ++q) {
    channels.emplace_back(plan, coeffs, static_cast<uint64_t>(q),
                          InputDomain::kBinary);
  }
  return channels;
}

NoisePlan WithSensitivity(NoisePlan plan, Sensitivity s) {
  plan.sensitivity = s;
  return plan;
}

// Feeds the sparse indicator to every channel.
std::vector<double> StepChannels(std::vector<FactorizationCounter>& channels,
                                 std::span<const int64_t> hits) {
  std::vector<double> out(channels.size());
  size_t next = 0;
  for (size_t q = 0; q < channels.size(); ++q) {
    double x = 0.0;
    if (next < hits.size() && hits[next] == static_cast<int64_t>(q)) {
      x = 1.0;
      ++next;
    }
    out[q] = channels[q].Step(x);
  }
  return out;
}

}  // namespace

std::vector<char32_t> DecodeUtf8(std::string_view text) {
  std::vector<char32_t> out;
  size_t i = 0;
  while (i < text.size()) {
    const auto lead = static_cast<unsigned char>(text[i]);
    int extra;
    char32_t cp;
    if (lead < 0x80) {
      extra = 0;
      cp = lead;
    } else if ((lead & 0xe0) == 0xc0) {
      extra = 1;
      cp = lead & 0x1f;
    } else if ((lead & 0xf0) == 0xe0) {
      extra = 2;
      cp = lead & 0x0f;
    } else if ((lead & 0xf8) == 0xf0) {
      extra = 3;
      cp = lead & 0x07;
    } else {
      BadUtf8(i);
    }
    if (i + extra >= text.size()) BadUtf8(i);
    for (int k = 1; k <= extra; ++k) {
      const auto c = static_cast<unsigned char>(text[i + k]);
      if ((c & 0xc0) != 0x80) BadUtf8(i + k);
      cp = (cp << 6) | (c & 0x3f);
    }
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

std::string EncodeUtf8(std::span<const char32_t> code_points) {
  std::string out;
  for (char32_t cp : code_points) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    } else {
      out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
    }
  }
  return out;
}

Alphabet::Alphabet(std::string_view letters) : letters_(DecodeUtf8(letters)) {
  if (letters_.empty()) throw std::invalid_argument("alphabet is empty");
  std::vector<char32_t> sorted = letters_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("alphabet repeats a letter");
  }
}

int Alphabet::IndexOf(char32_t letter) const {
  const auto it = std::find(letters_.begin(), letters_.end(), letter);
  if (it == letters_.end()) {
    const char32_t cp[] = {letter};
    throw std::invalid_argument("letter '" + EncodeUtf8(cp) +
                                "' is not in the alphabet");
  }
  return static_cast<int>(it - letters_.begin());
}

std::vector<int> Alphabet::Encode(std::string_view text) const {
  std::vector<int> out;
  for (char32_t cp : DecodeUtf8(text)) out.push_back(IndexOf(cp));
  return out;
}

std::string Alphabet::Decode(std::span<const int> word) const {
  std::vector<char32_t> cps;
  for (int w : word) cps.push_back(Letter(w));
  return EncodeUtf8(cps);
}

QueryIndex::QueryIndex(int alphabet_size, int max_length, int64_t cap)
    : k_(alphabet_size), ell_(max_length) {
  if (k_ < 1) throw std::invalid_argument("alphabet must be nonempty");
  if (ell_ < 1) throw std::invalid_argument("max length must be >= 1");
  offsets_.push_back(0);
  int64_t power = 1;
  for (int len = 1; len <= ell_; ++len) {
    if (power > cap / k_) {
      throw std::length_error("query dimension |U|^l exceeds the cap of " +
                              std::to_string(cap));
    }
    power *= k_;
    offsets_.push_back(offsets_.back() + power);
  }
}

int64_t QueryIndex::Index(std::span<const int> word) const {
  const int len = static_cast<int>(word.size());
  if (len < 1 || len > ell_) {
    throw std::invalid_argument("query word length outside [1, l]");
  }
  int64_t code = 0;
  for (int w : word) {
    if (w < 0 || w >= k_) throw std::invalid_argument("letter out of range");
    code = code * k_ + w;
  }
  return offsets_[len - 1] + code;
}

std::vector<int> QueryIndex::Word(int64_t index) const {
  if (index < 0 || index >= dim()) {
    throw std::out_of_range("query index out of range");
  }
  int len = 1;
  while (index >= offsets_[len]) ++len;
  int64_t code = index - offsets_[len - 1];
  std::vector<int> word(len);
  for (int i = len - 1; i >= 0; --i) {
    word[i] = static_cast<int>(code % k_);
    code /= k_;
  }
  return word;
}

SubstringCounter::SubstringCounter(const Alphabet& alphabet, int max_length,
                                   const NoisePlan& plan, int64_t cap,
                                   std::shared_ptr<const FactorCoeffs> coeffs)
    : alphabet_(alphabet),
      index_(alphabet.size(), max_length, cap),
      channels_(MakeChannels(
          index_.dim(),
          WithSensitivity(plan, Sensitivity::Substring(max_length)),
          std::move(coeffs))),
      counts_(index_.dim(), 0) {}

std::vector<double> SubstringCounter::Step(int letter) {
  if (letter < 0 || letter >= alphabet_.size()) {
    throw std::invalid_argument("letter index outside the alphabet");
  }
  if (t() >= channels_.front().horizon()) {
    throw std::out_of_range("substring stream horizon exceeded");
  }
  recent_.push_back(letter);
  if (static_cast<int>(recent_.size()) > index_.max_length()) {
    recent_.erase(recent_.begin());
  }
  last_.clear();
  const int n = static_cast<int>(recent_.size());
  for (int len = 1; len <= n; ++len) {
    last_.push_back(index_.Index(std::span(recent_).subspan(n - len)));
  }
  // Suffix indices grow with length because lengths occupy disjoint blocks.
  for (int64_t q : last_) ++counts_[q];
  return StepChannels(channels_, last_);
}

int64_t MinimalOccurrenceStart(std::span<const int> stream, int64_t t,
                               std::span<const int> episode) {
  const int64_t k = static_cast<int64_t>(episode.size());
  if (k == 0 || t < 1 || t > static_cast<int64_t>(stream.size())) return 0;
  if (stream[t - 1] != episode[k - 1]) return 0;
  // Latest start: match the episode right to left, each letter as late as
  // possible.
  int64_t pos = t;  // 1-based position of the current match
  for (int64_t i = k - 2; i >= 0; --i) {
    --pos;
    while (pos >= 1 && stream[pos - 1] != episode[i]) --pos;
    if (pos < 1) return 0;
  }
  const int64_t start = pos;
  // Reject if the window minus its last position still contains the episode.
  int64_t matched = 0;
  for (int64_t p = start; p < t && matched < k; ++p) {
    if (stream[p - 1] == episode[matched]) ++matched;
  }
  return matched == k ? 0 : start;
}

EpisodeCounter::EpisodeCounter(const Alphabet& alphabet, int max_length,
                               const NoisePlan& plan, int64_t cap,
                               std::shared_ptr<const FactorCoeffs> coeffs)
    : alphabet_(alphabet),
      index_(alphabet.size(), max_length, cap),
      channels_(MakeChannels(
          index_.dim(),
          WithSensitivity(plan,
                          Sensitivity::Episode(alphabet.size(), max_length)),
          std::move(coeffs))),
      counts_(index_.dim(), 0),
      support_(index_.dim(), 0),
      covered_until_(index_.dim(), 0) {}

std::vector<double> EpisodeCounter::Step(int letter) {
  if (letter < 0 || letter >= alphabet_.size()) {
    throw std::invalid_argument("letter index outside the alphabet");
  }
  if (t() >= channels_.front().horizon()) {
    throw std::out_of_range("episode stream horizon exceeded");
  }
  stream_.push_back(letter);
  const int64_t now = static_cast<int64_t>(stream_.size());
  last_.clear();
  for (int64_t q = 0; q < index_.dim(); ++q) {
    const std::vector<int> episode = index_.Word(q);
    if (episode.back() != letter) continue;
    const int64_t start = MinimalOccurrenceStart(stream_, now, episode);
    if (start == 0) continue;
    last_.push_back(q);
    ++counts_[q];
    // Minimal windows of one episode have increasing starts and ends, so the
    // newly covered positions are a suffix of this window.
    support_[q] += now - std::max(start - 1, covered_until_[q]);
    covered_until_[q] = now;
  }
  released_ = StepChannels(channels_, last_);
  return released_;
}

int64_t EpisodeCounter::Support(int64_t query) const {
  if (query < 0 || query >= index_.dim()) {
    throw std::out_of_range("query index out of range");
  }
  return support_[query];
}

std::vector<EpisodeCounter::Entry> EpisodeCounter::Report(
    int64_t min_support) const {
  std::vector<Entry> out;
  for (int64_t q = 0; q < static_cast<int64_t>(released_.size()); ++q) {
    if (support_[q] >= min_support) out.push_back({q, released_[q]});
  }
  return out;
}

}  // namespace contfact
