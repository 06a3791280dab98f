// Text preprocessing and character n-gram TF cosine similarity for the
// supervised disambiguation features.
#pragma once

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "namelab/porter.hpp"
#include "namelab/text.hpp"

namespace namelab {

enum class TextKind { name, title };

// A compact default English stopword list; pipelines usually supply their
// own file (one word per line).
inline const std::set<std::string>& default_stopwords() {
  static const std::set<std::string> words = {
      "a", "about", "above", "after", "again", "against", "all", "am", "an",
      "and", "any", "are", "as", "at", "be", "because", "been", "before",
      "being", "below", "between", "both", "but", "by", "can", "cannot",
      "could", "did", "do", "does", "doing", "down", "during", "each", "few",
      "for", "from", "further", "had", "has", "have", "having", "he", "her",
      "here", "hers", "herself", "him", "himself", "his", "how", "i", "if",
      "in", "into", "is", "it", "its", "itself", "me", "more", "most", "my",
      "myself", "no", "nor", "not", "of", "off", "on", "once", "only", "or",
      "other", "ought", "our", "ours", "ourselves", "out", "over", "own",
      "same", "she", "should", "so", "some", "such", "than", "that", "the",
      "their", "theirs", "them", "themselves", "then", "there", "these",
      "they", "this", "those", "through", "to", "too", "under", "until",
      "up", "very", "was", "we", "were", "what", "when", "where", "which",
      "while", "who", "whom", "why", "with", "would", "you", "your", "yours",
      "yourself", "yourselves",
  };
  return words;
}

// Lowercase, ASCII-encode, replace non-alphanumerics with spaces (commas
// survive in names, where they separate surname from forename). Titles
// additionally lose stopwords and get Porter-stemmed.
inline std::string preprocess(std::string_view raw, TextKind kind,
                              const std::set<std::string>& stopwords =
                                  default_stopwords()) {
  std::string ascii = to_ascii_lower(raw);
  std::string spaced;
  spaced.reserve(ascii.size());
  for (char c : ascii) {
    const bool keep = std::isalnum(static_cast<unsigned char>(c)) ||
                      (kind == TextKind::name && c == ',');
    spaced.push_back(keep ? c : ' ');
  }
  if (kind == TextKind::name) return collapse_whitespace(spaced);

  std::string out;
  for (const auto& token : split(collapse_whitespace(spaced), ' ')) {
    if (token.empty() || stopwords.count(token)) continue;
    if (!out.empty()) out.push_back(' ');
    out += porter_stem(token);
  }
  return out;
}

// Term-frequency vector over character n-grams.
using NgramProfile = std::map<std::string, double>;

// Contiguous n-grams per whitespace token, for each n in n_set, counted
// with term frequency. Tokens shorter than n contribute nothing for that n.
inline NgramProfile ngram_profile(std::string_view text,
                                  const std::set<std::size_t>& n_set = {2, 3,
                                                                        4}) {
  NgramProfile profile;
  for (const auto& token : split(text, ' ')) {
    if (token.empty()) continue;
    for (const auto n : n_set) {
      if (token.size() < n) continue;
      for (std::size_t i = 0; i + n <= token.size(); ++i)
        profile[token.substr(i, n)] += 1.0;
    }
  }
  return profile;
}

// dot(p,q) / (|p| |q|); 0 when either profile is empty. Nonnegative TF
// entries keep the result in [0,1].
inline double cosine(const NgramProfile& p, const NgramProfile& q) {
  if (p.empty() || q.empty()) return 0.0;
  double dot = 0.0, np = 0.0, nq = 0.0;
  const auto& small = p.size() <= q.size() ? p : q;
  const auto& large = p.size() <= q.size() ? q : p;
  for (const auto& [gram, tf] : small) {
    const auto it = large.find(gram);
    if (it != large.end()) dot += tf * it->second;
  }
  for (const auto& [gram, tf] : p) np += tf * tf;
  for (const auto& [gram, tf] : q) nq += tf * tf;
  if (np == 0.0 || nq == 0.0) return 0.0;
  double value = dot / (std::sqrt(np) * std::sqrt(nq));
  if (value > 1.0) value = 1.0;  // guard rounding at identical profiles
  return value;
}

}  // namespace namelab
