// Text normalization: transliteration, name parsing, email and DOI keys.
#pragma once

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace namelab {

namespace detail {

// Maps a Unicode codepoint to an ASCII replacement, or nullptr to drop it.
// Covers Latin-1 Supplement and Latin Extended-A, the ranges that occur in
// bibliographic bylines. Output is already lowercase.
inline const char* translit_codepoint(std::uint32_t cp) {
  switch (cp) {
    case 0x00C0: case 0x00C1: case 0x00C2: case 0x00C3: case 0x00C4:
    case 0x00C5: case 0x00E0: case 0x00E1: case 0x00E2: case 0x00E3:
    case 0x00E4: case 0x00E5: case 0x0100: case 0x0101: case 0x0102:
    case 0x0103: case 0x0104: case 0x0105:
      return "a";
    case 0x00C6: case 0x00E6:
      return "ae";
    case 0x00C7: case 0x00E7: case 0x0106: case 0x0107: case 0x0108:
    case 0x0109: case 0x010A: case 0x010B: case 0x010C: case 0x010D:
      return "c";
    case 0x010E: case 0x010F: case 0x0110: case 0x0111: case 0x00D0:
    case 0x00F0:
      return "d";
    case 0x00C8: case 0x00C9: case 0x00CA: case 0x00CB: case 0x00E8:
    case 0x00E9: case 0x00EA: case 0x00EB: case 0x0112: case 0x0113:
    case 0x0114: case 0x0115: case 0x0116: case 0x0117: case 0x0118:
    case 0x0119: case 0x011A: case 0x011B:
      return "e";
    case 0x011C: case 0x011D: case 0x011E: case 0x011F: case 0x0120:
    case 0x0121: case 0x0122: case 0x0123:
      return "g";
    case 0x0124: case 0x0125: case 0x0126: case 0x0127:
      return "h";
    case 0x00CC: case 0x00CD: case 0x00CE: case 0x00CF: case 0x00EC:
    case 0x00ED: case 0x00EE: case 0x00EF: case 0x0128: case 0x0129:
    case 0x012A: case 0x012B: case 0x012C: case 0x012D: case 0x012E:
    case 0x012F: case 0x0130: case 0x0131:
      return "i";
    case 0x0134: case 0x0135:
      return "j";
    case 0x0136: case 0x0137:
      return "k";
    case 0x0139: case 0x013A: case 0x013B: case 0x013C: case 0x013D:
    case 0x013E: case 0x0141: case 0x0142:
      return "l";
    case 0x00D1: case 0x00F1: case 0x0143: case 0x0144: case 0x0145:
    case 0x0146: case 0x0147: case 0x0148:
      return "n";
    case 0x00D2: case 0x00D3: case 0x00D4: case 0x00D5: case 0x00D6:
    case 0x00D8: case 0x00F2: case 0x00F3: case 0x00F4: case 0x00F5:
    case 0x00F6: case 0x00F8: case 0x014C: case 0x014D: case 0x014E:
    case 0x014F: case 0x0150: case 0x0151:
      return "o";
    case 0x0152: case 0x0153:
      return "oe";
    case 0x0154: case 0x0155: case 0x0156: case 0x0157: case 0x0158:
    case 0x0159:
      return "r";
    case 0x015A: case 0x015B: case 0x015C: case 0x015D: case 0x015E:
    case 0x015F: case 0x0160: case 0x0161:
      return "s";
    case 0x00DF:
      return "ss";
    case 0x0162: case 0x0163: case 0x0164: case 0x0165: case 0x0166:
    case 0x0167:
      return "t";
    case 0x00DE: case 0x00FE:
      return "th";
    case 0x00D9: case 0x00DA: case 0x00DB: case 0x00DC: case 0x00F9:
    case 0x00FA: case 0x00FB: case 0x00FC: case 0x0168: case 0x0169:
    case 0x016A: case 0x016B: case 0x016C: case 0x016D: case 0x016E:
    case 0x016F: case 0x0170: case 0x0171: case 0x0172: case 0x0173:
      return "u";
    case 0x0174: case 0x0175:
      return "w";
    case 0x00DD: case 0x00FD: case 0x00FF: case 0x0176: case 0x0177:
    case 0x0178:
      return "y";
    case 0x0179: case 0x017A: case 0x017B: case 0x017C: case 0x017D:
    case 0x017E:
      return "z";
    default:
      return nullptr;
  }
}

}  // namespace detail

// Lowercases ASCII letters and transliterates Latin diacritics to ASCII.
// Codepoints with no ASCII mapping are dropped.
inline std::string to_ascii_lower(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (c < 0x80) {
      out.push_back(static_cast<char>(std::tolower(c)));
      ++i;
      continue;
    }
    // Decode one UTF-8 sequence; malformed bytes are dropped.
    std::uint32_t cp = 0;
    std::size_t len = 0;
    if ((c & 0xE0) == 0xC0) { cp = c & 0x1F; len = 2; }
    else if ((c & 0xF0) == 0xE0) { cp = c & 0x0F; len = 3; }
    else if ((c & 0xF8) == 0xF0) { cp = c & 0x07; len = 4; }
    else { ++i; continue; }
    if (i + len > text.size()) { ++i; continue; }
    bool ok = true;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(text[i + k]);
      if ((cc & 0xC0) != 0x80) { ok = false; break; }
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (!ok) { ++i; continue; }
    if (const char* rep = detail::translit_codepoint(cp)) out += rep;
    i += len;
  }
  return out;
}

inline std::string collapse_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool in_space = true;  // leading spaces dropped
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      in_space = true;
    } else {
      if (in_space && !out.empty()) out.push_back(' ');
      out.push_back(c);
      in_space = false;
    }
  }
  return out;
}

inline std::string trim(std::string_view text) {
  std::size_t b = 0, e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  return std::string(text.substr(b, e - b));
}

// A normalized (surname, forename) pair.
struct NameKey {
  std::string surname;
  std::string forename;

  bool operator==(const NameKey&) const = default;
  auto operator<=>(const NameKey&) const = default;

  // "surname, forename" -- the full-string matching form.
  std::string full() const { return surname + ", " + forename; }

  // "<forename initial> <surname>" -- the blocking / first-initial form.
  std::string initial() const {
    std::string key;
    if (!forename.empty()) key.push_back(forename.front());
    key.push_back(' ');
    key += surname;
    return key;
  }
};

// One name component (a surname or forename on its own): lowercase, ASCII,
// punctuation to spaces, whitespace collapsed.
inline std::string normalize_name_part(std::string_view raw) {
  std::string out;
  for (char c : to_ascii_lower(raw)) {
    if (std::isalnum(static_cast<unsigned char>(c))) out.push_back(c);
    else out.push_back(' ');
  }
  return collapse_whitespace(out);
}

// Normalizes a raw byline name. Lowercase, diacritics to ASCII, punctuation
// replaced by spaces. A comma splits "surname, forename"; without one the
// last token is taken as the surname.
inline NameKey normalize_name(std::string_view raw) {
  std::string ascii = to_ascii_lower(raw);
  std::string left, right;
  bool seen_comma = false;
  for (char c : ascii) {
    std::string& side = seen_comma ? right : left;
    if (c == ',' && !seen_comma) {
      seen_comma = true;
    } else if (std::isalnum(static_cast<unsigned char>(c))) {
      side.push_back(c);
    } else {
      side.push_back(' ');
    }
  }
  left = collapse_whitespace(left);
  right = collapse_whitespace(right);
  if (left.empty() && right.empty())
    throw std::invalid_argument("normalize_name: blank name");

  NameKey key;
  if (seen_comma) {
    key.surname = left;
    key.forename = right;
  } else {
    const auto pos = left.rfind(' ');
    if (pos == std::string::npos) {
      key.surname = left;
    } else {
      key.surname = left.substr(pos + 1);
      key.forename = left.substr(0, pos);
    }
  }
  return key;
}

inline std::string normalize_email(std::string_view raw) {
  return to_ascii_lower(trim(raw));
}

// Local part: the string before the first '@' (whole address if none).
inline std::string email_local(std::string_view address) {
  const auto at = address.find('@');
  return std::string(address.substr(0, at == std::string_view::npos
                                            ? address.size()
                                            : at));
}

inline std::string alpha_only(std::string_view text) {
  std::string out;
  for (char c : text)
    if (std::isalpha(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

inline std::string alnum_only(std::string_view text) {
  std::string out;
  for (char c : text)
    if (std::isalnum(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

// Lowercase, trim, strip resolver prefixes ("https://doi.org/", "doi:").
inline std::string normalize_doi(std::string_view raw) {
  std::string doi = to_ascii_lower(trim(raw));
  for (std::string_view prefix :
       {"https://doi.org/", "http://doi.org/", "https://dx.doi.org/",
        "http://dx.doi.org/", "doi.org/", "doi:"}) {
    if (doi.starts_with(prefix)) {
      doi = trim(doi.substr(prefix.size()));
      break;
    }
  }
  return doi;
}

inline std::vector<std::string> split(std::string_view text, char delim) {
  std::vector<std::string> parts;
  std::size_t begin = 0;
  while (true) {
    const auto pos = text.find(delim, begin);
    if (pos == std::string_view::npos) {
      parts.emplace_back(text.substr(begin));
      return parts;
    }
    parts.emplace_back(text.substr(begin, pos - begin));
    begin = pos + 1;
  }
}

template <typename Range>
inline std::string join(const Range& parts, std::string_view sep) {
  std::string out;
  bool first = true;
  for (const auto& p : parts) {
    if (!first) out += sep;
    out += p;
    first = false;
  }
  return out;
}

}  // namespace namelab
