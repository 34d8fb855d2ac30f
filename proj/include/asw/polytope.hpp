#pragma once

// Lattice combinatorics of the rectangle [0,d1] x [0,d2].
//
// Weights are kept as integer numerators over D = d1*d2, so w(v) = weight_key(v)/D
// and every comparison stays exact without rational arithmetic.

#include <algorithm>
#include <compare>
#include <numeric>
#include <string>
#include <vector>

#include "asw/error.hpp"
#include "asw/rational.hpp"

namespace asw {

struct LatticePoint {
  long v1 = 0;
  long v2 = 0;

  auto operator<=>(const LatticePoint&) const = default;
  bool is_origin() const { return v1 == 0 && v2 == 0; }
};

inline std::string to_string(const LatticePoint& v) {
  return std::to_string(v.v1) + "," + std::to_string(v.v2);
}

inline LatticePoint parse_point(const std::string& key) {
  auto comma = key.find(',');
  if (comma == std::string::npos) throw Error(ErrorCode::kBadInput, "expected \"v1,v2\", got " + key);
  return {std::stol(key.substr(0, comma)), std::stol(key.substr(comma + 1))};
}

class RectDelta {
 public:
  RectDelta(long d1, long d2) : d1_(d1), d2_(d2) {
    if (d1 < 3 || d2 < 3) throw Error(ErrorCode::kBadInput, "rectangle sides must be >= 3");
  }

  long d1() const { return d1_; }
  long d2() const { return d2_; }
  long side(int c) const { return c == 0 ? d1_ : d2_; }
  // D = d1*d2 throughout (not the lcm).
  long D() const { return d1_ * d2_; }
  long L() const { return std::lcm(d1_, d2_); }
  long gcd() const { return std::gcd(d1_, d2_); }

  bool contains(const LatticePoint& v) const {
    return v.v1 >= 0 && v.v2 >= 0 && v.v1 <= d1_ && v.v2 <= d2_;
  }

  // All lattice points of the rectangle itself, in (v1, v2) order.
  std::vector<LatticePoint> lattice_points() const {
    std::vector<LatticePoint> out;
    for (long a = 0; a <= d1_; ++a)
      for (long b = 0; b <= d2_; ++b) out.push_back({a, b});
    return out;
  }

  // The four corners whose coefficients are normalized to 1.
  bool is_vertex(const LatticePoint& v) const {
    return (v.v1 == 0 || v.v1 == d1_) && (v.v2 == 0 || v.v2 == d2_);
  }

  bool operator==(const RectDelta&) const = default;

 private:
  long d1_;
  long d2_;
};

// D * w(v); w(v) = max(v1/d1, v2/d2).
inline long weight_key(const RectDelta& delta, const LatticePoint& v) {
  return std::max(v.v1 * delta.d2(), v.v2 * delta.d1());
}

inline Rational weight(const RectDelta& delta, const LatticePoint& v) {
  return make_rational(weight_key(delta, v), delta.D());
}

enum class Simplex { kS1, kS2 };

// S1 iff v1/d1 >= v2/d2 (ties go to S1).
inline Simplex simplex_class(const RectDelta& delta, const LatticePoint& v) {
  return v.v1 * delta.d2() >= v.v2 * delta.d1() ? Simplex::kS1 : Simplex::kS2;
}

inline int dominant_coordinate(const RectDelta& delta, const LatticePoint& v) {
  return simplex_class(delta, v) == Simplex::kS1 ? 0 : 1;
}

// Ordering used for every basis and matrix: (weight, v1, v2).
struct PointOrder {
  const RectDelta* delta;
  bool operator()(const LatticePoint& a, const LatticePoint& b) const {
    long wa = weight_key(*delta, a), wb = weight_key(*delta, b);
    if (wa != wb) return wa < wb;
    return a < b;
  }
};

inline void sort_points(const RectDelta& delta, std::vector<LatticePoint>& pts) {
  std::sort(pts.begin(), pts.end(), PointOrder{&delta});
}

// #{v : w(v) = k/D}, by enumeration over the bounding box.
inline long w_count(const RectDelta& delta, long k) {
  if (k < 0) return 0;
  long b1 = ceil_div(k, delta.d2());
  long b2 = ceil_div(k, delta.d1());
  long count = 0;
  for (long a = 0; a <= b1; ++a)
    for (long b = 0; b <= b2; ++b)
      if (weight_key(delta, {a, b}) == k) ++count;
  return count;
}

// W(k) - 2 W(k-D) + W(k-2D).
inline long h_count(const RectDelta& delta, long k) {
  const long D = delta.D();
  return w_count(delta, k) - 2 * w_count(delta, k - D) + w_count(delta, k - 2 * D);
}

// {0 <= n < D : d1 | n or d2 | n}, sorted.
inline std::vector<long> i_set(const RectDelta& delta) {
  std::vector<long> out;
  for (long n = 0; n < delta.D(); ++n)
    if (n % delta.d1() == 0 || n % delta.d2() == 0) out.push_back(n);
  return out;
}

inline bool in_i_set(const RectDelta& delta, long n) {
  return n >= 0 && n < delta.D() && (n % delta.d1() == 0 || n % delta.d2() == 0);
}

// Predecessor of n in I_D (n > 0 must belong to I_D).
inline long i_set_predecessor(const RectDelta& delta, long n) {
  for (long m = n - 1; m >= 0; --m)
    if (in_i_set(delta, m)) return m;
  throw Error(ErrorCode::kOutOfRange, "no predecessor of 0 in I_D");
}

// All v with w(v) <= wmax_key / D, sorted by (weight, v1, v2).
inline std::vector<LatticePoint> points_up_to_key(const RectDelta& delta, long wmax_key) {
  std::vector<LatticePoint> out;
  if (wmax_key < 0) return out;
  long b1 = wmax_key / delta.d2();
  long b2 = wmax_key / delta.d1();
  for (long a = 0; a <= b1; ++a)
    for (long b = 0; b <= b2; ++b)
      if (weight_key(delta, {a, b}) <= wmax_key) out.push_back({a, b});
  sort_points(delta, out);
  return out;
}

inline std::vector<LatticePoint> points_up_to_weight(const RectDelta& delta, const Rational& wmax) {
  if (wmax < 0) throw Error(ErrorCode::kOutOfRange, "negative weight bound");
  Rational scaled = wmax * delta.D();
  return points_up_to_key(delta, floor_of(scaled).get_si());
}

// F_n = {v : w(v) <= n/D}.
inline std::vector<LatticePoint> filtration(const RectDelta& delta, long n) {
  if (n < 0) throw Error(ErrorCode::kOutOfRange, "filtration index must be >= 0");
  return points_up_to_key(delta, n);
}

inline long k_n(const RectDelta& delta, long n) {
  long total = 0;
  for (long k = 0; k <= n; ++k) total += w_count(delta, k);
  return total;
}

}  // namespace asw
