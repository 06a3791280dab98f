// Porter suffix-stripping stemmer (Porter 1980, steps 1a-5b), following the
// author's canonical reference implementation, including its documented
// refinements (bli->ble, logi->log, words of length <= 2 untouched).
#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace namelab {

namespace detail {

class PorterBuffer {
 public:
  explicit PorterBuffer(std::string word)
      : b_(std::move(word)), k_(static_cast<std::ptrdiff_t>(b_.size()) - 1) {}

  std::string stem() {
    if (k_ <= 1) return b_;  // length 1-2: leave alone
    step1ab();
    step1c();
    step2();
    step3();
    step4();
    step5();
    return b_.substr(0, static_cast<std::size_t>(k_ + 1));
  }

 private:
  std::string b_;
  std::ptrdiff_t k_ = -1;  // last index of the current word
  std::ptrdiff_t j_ = -1;  // stem end set by ends()

  bool cons(std::ptrdiff_t i) const {
    switch (b_[static_cast<std::size_t>(i)]) {
      case 'a': case 'e': case 'i': case 'o': case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !cons(i - 1);
      default:
        return true;
    }
  }

  // Count of VC sequences in b[0..j], the measure m of the stem.
  int m() const {
    int n = 0;
    std::ptrdiff_t i = 0;
    while (true) {
      if (i > j_) return n;
      if (!cons(i)) break;
      ++i;
    }
    ++i;
    while (true) {
      while (true) {
        if (i > j_) return n;
        if (cons(i)) break;
        ++i;
      }
      ++i;
      ++n;
      while (true) {
        if (i > j_) return n;
        if (!cons(i)) break;
        ++i;
      }
      ++i;
    }
  }

  bool vowel_in_stem() const {
    for (std::ptrdiff_t i = 0; i <= j_; ++i)
      if (!cons(i)) return true;
    return false;
  }

  bool doublec(std::ptrdiff_t j) const {
    if (j < 1) return false;
    if (b_[static_cast<std::size_t>(j)] != b_[static_cast<std::size_t>(j - 1)])
      return false;
    return cons(j);
  }

  // consonant-vowel-consonant ending at i, last consonant not w/x/y
  bool cvc(std::ptrdiff_t i) const {
    if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) return false;
    const char ch = b_[static_cast<std::size_t>(i)];
    return ch != 'w' && ch != 'x' && ch != 'y';
  }

  bool ends(std::string_view s) {
    const auto len = static_cast<std::ptrdiff_t>(s.size());
    if (len > k_ + 1) return false;
    if (b_.compare(static_cast<std::size_t>(k_ - len + 1),
                   static_cast<std::size_t>(len), s) != 0)
      return false;
    j_ = k_ - len;
    return true;
  }

  void set_to(std::string_view s) {
    b_.replace(static_cast<std::size_t>(j_ + 1),
               b_.size() - static_cast<std::size_t>(j_ + 1), s);
    k_ = j_ + static_cast<std::ptrdiff_t>(s.size());
  }

  void replace_if_m(std::string_view s) {
    if (m() > 0) set_to(s);
  }

  void step1ab() {
    if (b_[static_cast<std::size_t>(k_)] == 's') {
      if (ends("sses")) k_ -= 2;
      else if (ends("ies")) set_to("i");
      else if (b_[static_cast<std::size_t>(k_ - 1)] != 's') --k_;
    }
    if (ends("eed")) {
      if (m() > 0) --k_;
    } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
      k_ = j_;
      if (ends("at")) set_to("ate");
      else if (ends("bl")) set_to("ble");
      else if (ends("iz")) set_to("ize");
      else if (doublec(k_)) {
        --k_;
        const char ch = b_[static_cast<std::size_t>(k_)];
        if (ch == 'l' || ch == 's' || ch == 'z') ++k_;
      } else if (m() == 1 && cvc(k_)) {
        set_to("e");
      }
    }
  }

  void step1c() {
    if (ends("y") && vowel_in_stem()) b_[static_cast<std::size_t>(k_)] = 'i';
  }

  void step2() {
    static constexpr std::pair<std::string_view, std::string_view> rules[] = {
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},
        {"anci", "ance"},   {"izer", "ize"},    {"bli", "ble"},
        {"alli", "al"},     {"entli", "ent"},   {"eli", "e"},
        {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
        {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"},
        {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"},
        {"iviti", "ive"},   {"biliti", "ble"},  {"logi", "log"},
    };
    for (const auto& [suffix, replacement] : rules) {
      if (ends(suffix)) {
        replace_if_m(replacement);
        return;
      }
    }
  }

  void step3() {
    static constexpr std::pair<std::string_view, std::string_view> rules[] = {
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
        {"ical", "ic"},  {"ful", ""},   {"ness", ""},
    };
    for (const auto& [suffix, replacement] : rules) {
      if (ends(suffix)) {
        replace_if_m(replacement);
        return;
      }
    }
  }

  void step4() {
    static constexpr std::string_view suffixes[] = {
        "al",  "ance", "ence", "er",  "ic",  "able", "ible", "ant", "ement",
        "ment", "ent", "ion",  "ou",  "ism", "ate",  "iti",  "ous", "ive",
        "ize",
    };
    for (const auto suffix : suffixes) {
      if (!ends(suffix)) continue;
      if (suffix == "ion" &&
          !(j_ >= 0 && (b_[static_cast<std::size_t>(j_)] == 's' ||
                        b_[static_cast<std::size_t>(j_)] == 't')))
        return;
      if (m() > 1) k_ = j_;
      return;
    }
  }

  void step5() {
    j_ = k_;
    if (b_[static_cast<std::size_t>(k_)] == 'e') {
      const int a = m();
      if (a > 1 || (a == 1 && !cvc(k_ - 1))) --k_;
    }
    if (b_[static_cast<std::size_t>(k_)] == 'l' && doublec(k_) && m() > 1)
      --k_;
  }
};

}  // namespace detail

// Stems one lowercase token. Tokens containing non-alphabetic characters
// pass through unchanged.
inline std::string porter_stem(std::string word) {
  for (char c : word)
    if (c < 'a' || c > 'z') return word;
  return detail::PorterBuffer(std::move(word)).stem();
}

}  // namespace namelab
