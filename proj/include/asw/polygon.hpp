#pragma once

// Exact Newton polygons and slope multisets.

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "asw/error.hpp"
#include "asw/polytope.hpp"
#include "asw/rational.hpp"

namespace asw {

// A valuation that may be infinite (the coefficient vanishes).
using Valuation = std::optional<Rational>;
inline const std::nullopt_t kInfinite = std::nullopt;

class SlopeMultiset {
 public:
  using Map = std::map<Rational, long>;

  SlopeMultiset() = default;

  void add(const Rational& slope, long multiplicity) {
    if (multiplicity == 0) return;
    long& m = counts_[slope];
    m += multiplicity;
    if (m < 0) throw Error(ErrorCode::kNegativeMultiplicity, "slope " + to_string(slope));
    if (m == 0) counts_.erase(slope);
  }

  void add(const SlopeMultiset& other, long times = 1) {
    for (const auto& [s, m] : other.counts_) add(s, m * times);
  }

  long multiplicity(const Rational& slope) const {
    auto it = counts_.find(slope);
    return it == counts_.end() ? 0 : it->second;
  }

  long total() const {
    long t = 0;
    for (const auto& [s, m] : counts_) t += m;
    return t;
  }

  Rational sum() const {
    Rational t = 0;
    for (const auto& [s, m] : counts_) t += s * m;
    return t;
  }

  bool empty() const { return counts_.empty(); }
  const Map& entries() const { return counts_; }
  Map::const_iterator begin() const { return counts_.begin(); }
  Map::const_iterator end() const { return counts_.end(); }

  // Slopes s with s < bound (or s <= bound when inclusive).
  SlopeMultiset below(const Rational& bound, bool inclusive = false) const {
    SlopeMultiset out;
    for (const auto& [s, m] : counts_)
      if (s < bound || (inclusive && s == bound)) out.add(s, m);
    return out;
  }

  // Multiplicity of slopes in the half-open interval (lo, hi].
  long count_in(const Rational& lo, const Rational& hi) const {
    long t = 0;
    for (const auto& [s, m] : counts_)
      if (s > lo && s <= hi) t += m;
    return t;
  }

  bool operator==(const SlopeMultiset& other) const { return counts_ == other.counts_; }

 private:
  Map counts_;
};

struct PolygonVertex {
  long x = 0;
  Rational y;
  bool operator==(const PolygonVertex&) const = default;
};

class NewtonPolygon {
 public:
  NewtonPolygon() : vertices_{{0, Rational(0)}} {}

  // Slopes in nondecreasing order; length = total multiplicity.
  static NewtonPolygon from_slopes(const SlopeMultiset& slopes) {
    NewtonPolygon p;
    long x = 0;
    Rational y = 0;
    for (const auto& [s, m] : slopes) {
      x += m;
      y += s * m;
      p.vertices_.push_back({x, y});
    }
    return p;
  }

  // Lower convex hull of the finite points. The leftmost point must be (0, 0).
  static NewtonPolygon from_valuations(const std::vector<std::pair<long, Valuation>>& points) {
    std::vector<std::pair<long, Rational>> finite;
    for (const auto& [k, v] : points)
      if (v) finite.emplace_back(k, *v);
    if (finite.empty()) throw Error(ErrorCode::kEmptyInput, "no finite valuations");
    std::sort(finite.begin(), finite.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (size_t i = 1; i < finite.size(); ++i)
      if (finite[i].first == finite[i - 1].first)
        throw Error(ErrorCode::kBadInput, "duplicate abscissa " + std::to_string(finite[i].first));
    if (finite.front().first != 0 || finite.front().second != 0)
      throw Error(ErrorCode::kBadInput, "polygon must start at (0, 0)");

    std::vector<std::pair<long, Rational>> hull;
    for (const auto& pt : finite) {
      while (hull.size() >= 2) {
        const auto& a = hull[hull.size() - 2];
        const auto& b = hull.back();
        // Drop b unless it lies strictly below the chord a -> pt.
        Rational cross = (b.second - a.second) * (pt.first - a.first) -
                         (pt.second - a.second) * (b.first - a.first);
        if (cross >= 0) hull.pop_back();
        else break;
      }
      hull.push_back(pt);
    }
    NewtonPolygon p;
    p.vertices_.clear();
    for (const auto& [x, y] : hull) p.vertices_.push_back({x, y});
    return p;
  }

  const std::vector<PolygonVertex>& vertices() const& { return vertices_; }
  // By value on temporaries, so range-for over f().vertices() stays valid.
  std::vector<PolygonVertex> vertices() && { return std::move(vertices_); }
  long length() const { return vertices_.back().x; }

  SlopeMultiset slopes() const {
    SlopeMultiset out;
    for (size_t i = 1; i < vertices_.size(); ++i) {
      long run = vertices_[i].x - vertices_[i - 1].x;
      out.add((vertices_[i].y - vertices_[i - 1].y) / run, run);
    }
    return out;
  }

  // Height at integer abscissa x in [0, length].
  Rational value_at(long x) const {
    if (x < 0 || x > length()) throw Error(ErrorCode::kOutOfRange, "abscissa outside polygon");
    for (size_t i = 1; i < vertices_.size(); ++i) {
      const auto& a = vertices_[i - 1];
      const auto& b = vertices_[i];
      if (x <= b.x) {
        Rational t = make_rational(x - a.x, b.x - a.x);
        return a.y + (b.y - a.y) * t;
      }
    }
    return vertices_.front().y;
  }

  NewtonPolygon truncate(long x0) const {
    if (x0 < 0 || x0 > length()) throw Error(ErrorCode::kOutOfRange, "truncation beyond length");
    NewtonPolygon p;
    for (size_t i = 1; i < vertices_.size(); ++i) {
      if (vertices_[i].x < x0) {
        p.vertices_.push_back(vertices_[i]);
      } else {
        p.vertices_.push_back({x0, value_at(x0)});
        break;
      }
    }
    if (x0 == 0) p.vertices_.resize(1);
    return p;
  }

  bool operator==(const NewtonPolygon& other) const { return vertices_ == other.vertices_; }

 private:
  std::vector<PolygonVertex> vertices_;
};

// P(x) >= Q(x) at every integer x of the common range.
inline bool lies_above(const NewtonPolygon& p, const NewtonPolygon& q) {
  long len = std::min(p.length(), q.length());
  for (long x = 0; x <= len; ++x)
    if (p.value_at(x) < q.value_at(x)) return false;
  return true;
}

// Slopes k/D with multiplicity W(k), for k/D <= weight_bound.
inline NewtonPolygon hodge_c(const RectDelta& delta, const Rational& weight_bound) {
  SlopeMultiset s;
  long kmax = floor_of(weight_bound * delta.D()).get_si();
  for (long k = 0; k <= kmax; ++k) s.add(make_rational(k, delta.D()), w_count(delta, k));
  return NewtonPolygon::from_slopes(s);
}

// Slopes k/D with multiplicity H(k), 0 <= k <= 2D; length 2D.
inline NewtonPolygon hodge_l(const RectDelta& delta) {
  SlopeMultiset s;
  for (long k = 0; k <= 2 * delta.D(); ++k) s.add(make_rational(k, delta.D()), h_count(delta, k));
  return NewtonPolygon::from_slopes(s);
}

struct SlopeShift {
  Rational shift;
  long weight;  // signed multiplicity of the shifted copy
};

// Slope-level form of multiplicative relations like L^{-1}(s) = C(s) C(q^2 s) / C(q s)^2:
// result(s) = sum_j weight_j * C(s - shift_j), kept for s < bound.
// `complete_below` is the slope up to which C is known in full.
inline SlopeMultiset twist_merge(const SlopeMultiset& c, const Rational& complete_below,
                                 const std::vector<SlopeShift>& shifts, const Rational& bound) {
  if (complete_below < bound)
    throw Error(ErrorCode::kIncompleteInput, "slopes known only below " + to_string(complete_below));
  std::map<Rational, long> acc;
  for (const auto& sh : shifts)
    for (const auto& [s, m] : c) {
      Rational t = s + sh.shift;
      if (t < bound) acc[t] += sh.weight * m;
    }
  SlopeMultiset out;
  for (const auto& [s, m] : acc) {
    if (m < 0) throw Error(ErrorCode::kNegativeMultiplicity, "slope " + to_string(s));
    if (m > 0) out.add(s, m);
  }
  return out;
}

}  // namespace asw
