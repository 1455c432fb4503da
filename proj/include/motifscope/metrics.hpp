#pragma once

#include <cstdint>
#include <cstdio>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "motifscope/motif.hpp"

namespace motifscope {

/// Exact fraction in lowest terms with a positive denominator.
class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den) {
    if (den_ == 0) throw GraphError("zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    const auto g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  constexpr std::int64_t num() const { return num_; }
  constexpr std::int64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend constexpr Rational operator+(Rational a, Rational b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend constexpr bool operator==(Rational a, Rational b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend constexpr bool operator<(Rational a, Rational b) { return a.num_ * b.den_ < b.num_ * a.den_; }

  std::string str() const { return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_); }

  /// Decimal rendering with a fixed number of places.
  std::string decimal(int places) const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", places, value());
    return buf;
  }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline std::ostream& operator<<(std::ostream& os, Rational r) { return os << r.str(); }

/// Purchasability of a motif position: its in-degree over the motif's edge
/// count; empty for positions nothing points to.
inline std::optional<Rational> purchasability(const MotifClass& c, unsigned position) {
  if (position >= c.k) throw GraphError("position out of range");
  const unsigned in = c.canonical.in_degree(position);
  if (in == 0) return std::nullopt;
  return Rational(in, c.edge_count);
}

/// Fraction of positions with a defined purchasability.
inline Rational motif_rank(const MotifClass& c) {
  unsigned defined = 0;
  for (unsigned p = 0; p < c.k; ++p)
    if (c.canonical.in_degree(p) > 0) ++defined;
  return Rational(defined, c.k);
}

struct MotifMetrics {
  unsigned k = 0;
  ClassId class_id = 0;
  unsigned edge_count = 0;
  std::vector<std::optional<Rational>> positions;  // canonical node order

  struct Level {
    unsigned in_degree;
    Rational f;
    unsigned positions;  // how many nodes share this in-degree
  };
  /// Defined values keyed by in-degree, ascending.
  std::vector<Level> levels;
  Rational rank;
};

inline MotifMetrics metrics_for(const MotifClass& c) {
  MotifMetrics m;
  m.k = c.k;
  m.class_id = c.class_id;
  m.edge_count = c.edge_count;
  for (unsigned p = 0; p < c.k; ++p) m.positions.push_back(purchasability(c, p));
  for (unsigned d : c.in_degree_profile) {
    if (d == 0) continue;
    if (!m.levels.empty() && m.levels.back().in_degree == d)
      ++m.levels.back().positions;
    else
      m.levels.push_back({d, Rational(d, c.edge_count), 1});
  }
  m.rank = motif_rank(c);
  return m;
}

/// One row per catalog class. Rows carry k: values are only comparable
/// among motifs of the same order.
inline std::vector<MotifMetrics> metrics_table(const MotifCatalog& cat) {
  std::vector<MotifMetrics> rows;
  rows.reserve(cat.size());
  for (const auto& c : cat.classes()) rows.push_back(metrics_for(c));
  return rows;
}

}  // namespace motifscope
