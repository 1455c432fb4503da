#pragma once

#include <charconv>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "motifscope/graph.hpp"

namespace motifscope {

/// Malformed input; `where()` names the line or metadata block.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
std::optional<T> to_number(std::string_view s) {
  T value{};
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

inline bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

}  // namespace detail

/// SNAP edge list: '#' lines are comments, every other non-blank line holds
/// exactly two integer ids.
inline std::vector<std::pair<ExternalId, ExternalId>> parse_edge_list(std::istream& in) {
  std::vector<std::pair<ExternalId, ExternalId>> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto text = detail::trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto tokens = detail::split_ws(text);
    const auto where = "line " + std::to_string(lineno);
    if (tokens.size() != 2) throw ParseError(where, "expected 2 integer tokens, found " + std::to_string(tokens.size()));
    const auto a = detail::to_number<ExternalId>(tokens[0]);
    const auto b = detail::to_number<ExternalId>(tokens[1]);
    if (!a || !b) throw ParseError(where, "non-integer node id");
    pairs.emplace_back(*a, *b);
  }
  return pairs;
}

struct Review {
  std::string date;
  std::string customer;
  int rating = 0;
  int votes = 0;
  int helpful = 0;
  friend bool operator==(const Review&, const Review&) = default;
};

/// One product block of the amazon-meta format.
struct ProductRecord {
  ExternalId id = -1;
  std::string asin;
  std::optional<std::string> title;
  std::optional<std::string> group;
  std::optional<std::int64_t> salesrank;
  std::vector<std::string> similar;
  /// Raw paths such as "|Books[283155]|Subjects[1000]|...".
  std::vector<std::string> categories;
  std::int64_t reviews_total = 0;
  double avg_rating = 0.0;
  std::vector<Review> reviews;
  bool discontinued = false;
  friend bool operator==(const ProductRecord&, const ProductRecord&) = default;
};

/// Splits a raw category path on '|', skipping empty segments.
inline std::vector<std::string> split_category_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i <= path.size()) {
    const auto j = std::min(path.find('|', i), path.size());
    if (j > i) parts.emplace_back(path.substr(i, j - i));
    i = j + 1;
  }
  return parts;
}

namespace detail {

// "key: value" with the key matched exactly; returns the trimmed value.
inline std::optional<std::string_view> field(std::string_view line, std::string_view key) {
  if (!starts_with(line, key)) return std::nullopt;
  return trim(line.substr(key.size()));
}

inline Review parse_review(std::string_view line, const std::string& where) {
  // 2000-7-28  cutomer: A2JW67OY8U6HHK  rating: 5  votes:  10  helpful:   9
  const auto t = split_ws(line);
  if (t.size() != 9 || t[1] != "cutomer:" || t[3] != "rating:" || t[5] != "votes:" || t[7] != "helpful:")
    throw ParseError(where, "malformed review line '" + std::string(line) + "'");
  Review r;
  r.date = t[0];
  r.customer = t[2];
  const auto rating = to_number<int>(t[4]);
  const auto votes = to_number<int>(t[6]);
  const auto helpful = to_number<int>(t[8]);
  if (!rating || !votes || !helpful) throw ParseError(where, "non-integer review field");
  if (*rating < 1 || *rating > 5) throw ParseError(where, "review rating outside 1..5");
  r.rating = *rating;
  r.votes = *votes;
  r.helpful = *helpful;
  return r;
}

}  // namespace detail

/// Parses the amazon-meta text format. Lines before the first "Id:" header
/// (file banner, "Total items:") are ignored.
inline std::vector<ProductRecord> parse_metadata(std::istream& in) {
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }

  std::vector<ProductRecord> records;
  std::size_t i = 0;
  const std::size_t n = lines.size();
  while (i < n && !detail::starts_with(detail::trim(lines[i]), "Id:")) ++i;

  while (i < n) {
    const std::size_t block_line = i + 1;
    ProductRecord rec;
    const auto id_text = *detail::field(detail::trim(lines[i]), "Id:");
    const auto id = detail::to_number<ExternalId>(id_text);
    if (!id) throw ParseError("block at line " + std::to_string(block_line), "malformed Id");
    rec.id = *id;
    const std::string where = "block Id " + std::to_string(rec.id);
    ++i;

    auto next_is_body = [&] {
      if (i >= n) return false;
      const auto t = detail::trim(lines[i]);
      return !t.empty() && !detail::starts_with(t, "Id:");
    };

    while (next_is_body()) {
      const auto t = detail::trim(lines[i]);
      ++i;
      if (auto v = detail::field(t, "ASIN:")) {
        rec.asin = *v;
      } else if (t == "discontinued product") {
        rec.discontinued = true;
      } else if (auto v = detail::field(t, "title:")) {
        rec.title = std::string(*v);
      } else if (auto v = detail::field(t, "group:")) {
        rec.group = std::string(*v);
      } else if (auto v = detail::field(t, "salesrank:")) {
        const auto rank = detail::to_number<std::int64_t>(*v);
        if (!rank) throw ParseError(where, "malformed salesrank");
        rec.salesrank = *rank;
      } else if (auto v = detail::field(t, "similar:")) {
        const auto tokens = detail::split_ws(*v);
        const auto count = tokens.empty() ? std::nullopt : detail::to_number<std::size_t>(tokens[0]);
        if (!count) throw ParseError(where, "malformed similar count");
        if (tokens.size() - 1 != *count)
          throw ParseError(where, "similar declares " + std::to_string(*count) + " items, found " +
                                      std::to_string(tokens.size() - 1));
        for (std::size_t s = 1; s < tokens.size(); ++s) rec.similar.emplace_back(tokens[s]);
      } else if (auto v = detail::field(t, "categories:")) {
        const auto count = detail::to_number<std::size_t>(*v);
        if (!count) throw ParseError(where, "malformed categories count");
        for (std::size_t c = 0; c < *count; ++c) {
          const auto path = i < n ? detail::trim(lines[i]) : std::string_view{};
          if (!detail::starts_with(path, "|"))
            throw ParseError(where, "categories declares " + std::to_string(*count) + " paths, found " +
                                        std::to_string(c));
          rec.categories.emplace_back(path);
          ++i;
        }
      } else if (auto v = detail::field(t, "reviews:")) {
        // total: 2  downloaded: 2  avg rating: 5
        const auto tokens = detail::split_ws(*v);
        if (tokens.size() != 7 || tokens[0] != "total:" || tokens[2] != "downloaded:" || tokens[4] != "avg" ||
            tokens[5] != "rating:")
          throw ParseError(where, "malformed reviews header");
        const auto total = detail::to_number<std::int64_t>(tokens[1]);
        const auto downloaded = detail::to_number<std::size_t>(tokens[3]);
        const auto avg = detail::to_number<double>(tokens[6]);
        if (!total || !downloaded || !avg) throw ParseError(where, "malformed reviews header");
        rec.reviews_total = *total;
        rec.avg_rating = *avg;
        for (std::size_t r = 0; r < *downloaded; ++r) {
          const auto line = i < n ? detail::trim(lines[i]) : std::string_view{};
          if (line.empty() || detail::starts_with(line, "Id:") || line.find("cutomer:") == std::string_view::npos)
            throw ParseError(where, "reviews declares " + std::to_string(*downloaded) + " downloaded, found " +
                                        std::to_string(r));
          rec.reviews.push_back(detail::parse_review(line, where));
          ++i;
        }
      } else {
        throw ParseError(where, "unrecognized line '" + std::string(t) + "'");
      }
    }
    if (rec.asin.empty()) throw ParseError(where, "block without ASIN");
    if (rec.discontinued && (rec.title || rec.group || rec.salesrank))
      throw ParseError(where, "discontinued product carries catalog fields");
    records.push_back(std::move(rec));

    while (i < n && detail::trim(lines[i]).empty()) ++i;
    if (i < n && !detail::starts_with(detail::trim(lines[i]), "Id:"))
      throw ParseError("line " + std::to_string(i + 1), "expected 'Id:' block header");
  }
  return records;
}

namespace detail {

inline std::string format_rating(double r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

}  // namespace detail

/// Writes records back in the amazon-meta layout; parse_metadata reads the
/// output back to equal records.
inline void write_metadata(std::ostream& out, const std::vector<ProductRecord>& records) {
  for (const auto& r : records) {
    out << "Id:   " << r.id << "\n";
    out << "ASIN: " << r.asin << "\n";
    if (r.discontinued) {
      out << "  discontinued product\n\n";
      continue;
    }
    if (r.title) out << "  title: " << *r.title << "\n";
    if (r.group) out << "  group: " << *r.group << "\n";
    if (r.salesrank) out << "  salesrank: " << *r.salesrank << "\n";
    out << "  similar: " << r.similar.size();
    for (const auto& s : r.similar) out << "  " << s;
    out << "\n";
    out << "  categories: " << r.categories.size() << "\n";
    for (const auto& c : r.categories) out << "   " << c << "\n";
    out << "  reviews: total: " << r.reviews_total << "  downloaded: " << r.reviews.size()
        << "  avg rating: " << detail::format_rating(r.avg_rating) << "\n";
    for (const auto& v : r.reviews)
      out << "    " << v.date << "  cutomer: " << v.customer << "  rating: " << v.rating << "  votes: " << v.votes
          << "  helpful: " << v.helpful << "\n";
    out << "\n";
  }
}

}  // namespace motifscope
