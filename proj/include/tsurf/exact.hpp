#pragma once

// Exact arithmetic over real multi-quadratic fields Q(sqrt(d_1),...,sqrt(d_m))
// with pairwise coprime squarefree radicands. A Scalar is a rational
// coefficient vector over the 2^m subset-product basis; a CNum is a pair of
// Scalars. All arithmetic is exact; signs are decided by adaptive-precision
// interval evaluation with an exact zero test as fallback.

#include <gmpxx.h>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace tsurf {

using Rat = mpq_class;
using Int = mpz_class;
using Json = nlohmann::json;

struct FieldMismatch : std::invalid_argument {
  explicit FieldMismatch(const std::string& what) : std::invalid_argument(what) {}
};

int rat_sign(const Rat& r);
bool rat_is_integer(const Rat& r);
std::string rat_str(const Rat& r);
Rat rat_parse(const std::string& s);

// Radicand list d_1 < d_2 < ... < d_m; each d_i >= 2, squarefree, pairwise
// coprime. Basis element for subset S of {1..m} (binary-counter order, bit
// i-1 <-> d_i) is sqrt of the product of the selected radicands.
struct FieldSpec {
  std::vector<long> radicands;

  FieldSpec() = default;
  explicit FieldSpec(std::vector<long> ds);

  std::size_t dim() const { return std::size_t{1} << radicands.size(); }
  std::size_t count() const { return radicands.size(); }
  long basis_radicand(unsigned subset) const;
  bool contains(const FieldSpec& sub) const;
  static FieldSpec join(const FieldSpec& a, const FieldSpec& b);
  bool operator==(const FieldSpec&) const = default;
  std::string str() const;
};

class Scalar {
 public:
  Scalar() : coeffs_(1, Rat(0)) {}
  Scalar(long v) : coeffs_(1, Rat(v)) {}  // NOLINT: implicit by design
  Scalar(const Rat& v) : coeffs_(1, v) {}  // NOLINT
  Scalar(FieldSpec f, std::vector<Rat> coeffs);

  static Scalar rational(const FieldSpec& f, const Rat& v);
  static Scalar zero(const FieldSpec& f) { return rational(f, Rat(0)); }
  static Scalar one(const FieldSpec& f) { return rational(f, Rat(1)); }
  // basis element sqrt(prod of subset); subset in binary-counter order
  static Scalar basis_root(const FieldSpec& f, unsigned subset);
  // sqrt(d) for d a subset product of f's radicands; throws otherwise
  static Scalar root_of(const FieldSpec& f, long d);

  const FieldSpec& field() const { return field_; }
  const std::vector<Rat>& coeffs() const { return coeffs_; }

  bool is_zero() const;
  bool is_rational() const;
  Rat rational_value() const;  // requires is_rational()
  Scalar lift(const FieldSpec& bigger) const;

  int sign() const;
  double approx() const;

  Scalar operator-() const;
  Scalar inverse() const;

  friend Scalar operator+(const Scalar& a, const Scalar& b);
  friend Scalar operator-(const Scalar& a, const Scalar& b);
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b);
  Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
  Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
  Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
  Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

  friend bool operator==(const Scalar& a, const Scalar& b);
  friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
  friend bool operator<(const Scalar& a, const Scalar& b) { return (a - b).sign() < 0; }
  friend bool operator>(const Scalar& a, const Scalar& b) { return (a - b).sign() > 0; }
  friend bool operator<=(const Scalar& a, const Scalar& b) { return (a - b).sign() <= 0; }
  friend bool operator>=(const Scalar& a, const Scalar& b) { return (a - b).sign() >= 0; }

  std::string str() const;

 private:
  FieldSpec field_;
  std::vector<Rat> coeffs_;  // size == field_.dim()

  // aligns two scalars into a common field (subset embedding only)
  static void align(Scalar& a, Scalar& b);
};

int cmp(const Scalar& a, const Scalar& b);
Scalar abs(const Scalar& a);

struct CNum {
  Scalar re, im;

  CNum() = default;
  CNum(Scalar r, Scalar i) : re(std::move(r)), im(std::move(i)) {}

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  CNum operator-() const { return CNum(-re, -im); }
  friend CNum operator+(const CNum& a, const CNum& b) { return CNum(a.re + b.re, a.im + b.im); }
  friend CNum operator-(const CNum& a, const CNum& b) { return CNum(a.re - b.re, a.im - b.im); }
  friend CNum operator*(const Scalar& s, const CNum& v) { return CNum(s * v.re, s * v.im); }
  friend bool operator==(const CNum& a, const CNum& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const CNum& a, const CNum& b) { return !(a == b); }
  CNum& operator+=(const CNum& o) { return *this = *this + o; }
  CNum& operator-=(const CNum& o) { return *this = *this - o; }

  CNum lift(const FieldSpec& f) const { return CNum(re.lift(f), im.lift(f)); }
  std::string str() const { return "(" + re.str() + ", " + im.str() + ")"; }
};

// cross(a,b) > 0 iff b is counterclockwise of a (within a half turn)
Scalar cross(const CNum& a, const CNum& b);
Scalar dot(const CNum& a, const CNum& b);

Json scalar_to_json(const Scalar& s);
Scalar scalar_from_json(const Json& j);
Json cnum_to_json(const CNum& v);
CNum cnum_from_json(const Json& j);

}  // namespace tsurf
