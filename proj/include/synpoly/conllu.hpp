#pragma once

#include <charconv>
#include <cstddef>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "synpoly/error.hpp"
#include "synpoly/relations.hpp"

namespace synpoly {

struct TokenRow {
  int id = 0;
  int head = 0;  // 0 marks the sentence root
  std::string deprel;
  std::string form;

  friend bool operator==(const TokenRow&, const TokenRow&) = default;
};

struct SentenceRecord {
  std::string sent_id;
  std::string language;
  std::vector<TokenRow> tokens;

  friend bool operator==(const SentenceRecord&, const SentenceRecord&) = default;
};

namespace detail {

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find('\t', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

/// Splits on '\n' and drops a trailing '\r' from each line.
inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back(line);
    pos = end + 1;
  }
  return out;
}

inline std::optional<int> parse_int(std::string_view s) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

inline std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::string where(std::string_view language, std::size_t line_no) {
  return (language.empty() ? std::string("line ") : std::string(language) + " line ") +
         std::to_string(line_no);
}

}  // namespace detail

/// Checks the single-root, closed-heads, acyclic invariants of a sentence.
inline void validate_tree(const SentenceRecord& rec) {
  auto fail = [&](const std::string& why) {
    throw Error(ErrorKind::NonTreeStructure, "sentence '" + rec.sent_id + "': " + why);
  };
  if (rec.tokens.empty()) fail("no word tokens");

  std::unordered_map<int, std::size_t> position;
  int roots = 0;
  for (std::size_t i = 0; i < rec.tokens.size(); ++i) {
    const auto& tok = rec.tokens[i];
    if (!position.emplace(tok.id, i).second) fail("duplicate token id " + std::to_string(tok.id));
    if (tok.head == 0) ++roots;
  }
  if (roots != 1) fail(std::to_string(roots) + " tokens attached to the root");

  for (const auto& tok : rec.tokens) {
    if (tok.head == tok.id) fail("token " + std::to_string(tok.id) + " heads itself");
    if (tok.head != 0 && !position.contains(tok.head)) {
      fail("token " + std::to_string(tok.id) + " has unknown head " + std::to_string(tok.head));
    }
  }

  // Walk each token to the root; a walk longer than the token count is a cycle.
  for (const auto& tok : rec.tokens) {
    int current = tok.id;
    std::size_t steps = 0;
    while (current != 0) {
      current = rec.tokens[position.at(current)].head;
      if (++steps > rec.tokens.size()) fail("cycle through token " + std::to_string(tok.id));
    }
  }
}

/// Parses basic-dependency word lines of a CoNLL-U document.
///
/// Multiword-token ranges (`3-4`) and empty nodes (`5.1`) are skipped, and
/// every comment other than `# sent_id` is ignored. Each sentence is checked
/// to be a rooted tree and every relation must map onto a universal label.
inline std::vector<SentenceRecord> parse_conllu(std::string_view text, std::string_view language) {
  std::vector<SentenceRecord> sentences;
  SentenceRecord current;
  current.language = std::string(language);
  bool have_sent_id = false;
  bool in_block = false;
  std::size_t block_start = 0;

  auto flush = [&] {
    if (in_block && !current.tokens.empty()) {
      if (!have_sent_id) {
        throw Error(ErrorKind::MissingSentId, "sentence starting at " + detail::where(language, block_start) +
                                                  " has no '# sent_id' comment");
      }
      validate_tree(current);
      sentences.push_back(std::move(current));
    }
    current = SentenceRecord{};
    current.language = std::string(language);
    have_sent_id = false;
    in_block = false;
  };

  auto lines = detail::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    auto line = lines[i];

    if (detail::trim(line).empty()) {
      flush();
      continue;
    }
    if (!in_block) {
      in_block = true;
      block_start = line_no;
    }

    if (line.front() == '#') {
      auto body = detail::trim(line.substr(1));
      if (body.starts_with("sent_id")) {
        auto rest = detail::trim(body.substr(7));
        if (!rest.empty() && rest.front() == '=') rest = detail::trim(rest.substr(1));
        current.sent_id = std::string(rest);
        have_sent_id = !rest.empty();
      }
      continue;
    }

    auto cols = detail::split_tabs(line);
    if (cols.size() != 10) {
      throw Error(ErrorKind::MalformedLine, detail::where(language, line_no) + ": expected 10 columns, found " +
                                                std::to_string(cols.size()));
    }
    if (cols[0].find_first_of("-.") != std::string_view::npos) continue;

    auto id = detail::parse_int(cols[0]);
    auto head = detail::parse_int(cols[6]);
    if (!id || *id < 1) {
      throw Error(ErrorKind::MalformedLine,
                  detail::where(language, line_no) + ": bad ID '" + std::string(cols[0]) + "'");
    }
    if (!head || *head < 0) {
      throw Error(ErrorKind::MalformedLine,
                  detail::where(language, line_no) + ": bad HEAD '" + std::string(cols[6]) + "'");
    }
    if (cols[7].empty() || cols[7] == "_") {
      throw Error(ErrorKind::MalformedLine, detail::where(language, line_no) + ": empty DEPREL");
    }
    if (!is_known_relation(cols[7])) {
      throw Error(ErrorKind::UnknownRelation,
                  detail::where(language, line_no) + ": relation '" + std::string(cols[7]) + "'");
    }
    current.tokens.push_back(TokenRow{*id, *head, std::string(cols[7]), std::string(cols[1])});
  }
  flush();
  return sentences;
}

/// Writes the record back as CoNLL-U; only FORM, HEAD and DEPREL are populated.
inline std::string to_conllu(const SentenceRecord& rec) {
  std::string out = "# sent_id = " + rec.sent_id + "\n";
  for (const auto& tok : rec.tokens) {
    out += std::to_string(tok.id) + '\t' + (tok.form.empty() ? "_" : tok.form) + "\t_\t_\t_\t_\t" +
           std::to_string(tok.head) + '\t' + tok.deprel + "\t_\t_\n";
  }
  out += '\n';
  return out;
}

/// Looks for a UD release tag such as `UD 2.13` or `ud_version = 2.13` in
/// comment lines. Returns an empty string when none is present.
inline std::string find_release_version(std::string_view text) {
  static const std::regex pattern(R"(\b(?:ud[_ ]?version|ud[_ ]?v?|release)\s*[=:]?\s*v?(\d+\.\d+)\b)",
                                  std::regex::icase);
  for (auto line : detail::split_lines(text)) {
    if (line.empty() || line.front() != '#') continue;
    std::match_results<std::string_view::const_iterator> m;
    if (std::regex_search(line.begin(), line.end(), m, pattern)) return m[1].str();
  }
  return {};
}

}  // namespace synpoly
