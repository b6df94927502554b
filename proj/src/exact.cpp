#include "tsurf/exact.hpp"

#include <mpfr.h>

#include <algorithm>
#include <numeric>

namespace tsurf {

int rat_sign(const Rat& r) { return sgn(r); }

bool rat_is_integer(const Rat& r) { return mpz_cmp_ui(r.get_den().get_mpz_t(), 1) == 0; }

std::string rat_str(const Rat& r) { return r.get_str(); }

Rat rat_parse(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  Rat r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
  if (mpz_sgn(r.get_den().get_mpz_t()) == 0) throw std::invalid_argument("zero denominator: " + s);
  r.canonicalize();
  return r;
}

namespace {

bool is_squarefree(long d) {
  for (long p = 2; p * p <= d; ++p) {
    if (d % (p * p) == 0) return false;
  }
  return true;
}

}  // namespace

FieldSpec::FieldSpec(std::vector<long> ds) : radicands(std::move(ds)) {
  for (std::size_t i = 0; i < radicands.size(); ++i) {
    long d = radicands[i];
    if (d < 2) throw std::invalid_argument("radicand must be >= 2");
    if (!is_squarefree(d)) throw std::invalid_argument("radicand not squarefree: " + std::to_string(d));
    if (i > 0 && radicands[i - 1] >= d) throw std::invalid_argument("radicands must be strictly increasing");
    for (std::size_t j = 0; j < i; ++j) {
      if (std::gcd(radicands[j], d) != 1)
        throw std::invalid_argument("radicands must be pairwise coprime");
    }
  }
  if (radicands.size() > 20) throw std::invalid_argument("too many radicands");
}

long FieldSpec::basis_radicand(unsigned subset) const {
  long p = 1;
  for (std::size_t i = 0; i < radicands.size(); ++i) {
    if (subset & (1u << i)) p *= radicands[i];
  }
  return p;
}

bool FieldSpec::contains(const FieldSpec& sub) const {
  for (long d : sub.radicands) {
    if (std::find(radicands.begin(), radicands.end(), d) == radicands.end()) return false;
  }
  return true;
}

FieldSpec FieldSpec::join(const FieldSpec& a, const FieldSpec& b) {
  std::vector<long> ds = a.radicands;
  for (long d : b.radicands) {
    if (std::find(ds.begin(), ds.end(), d) == ds.end()) ds.push_back(d);
  }
  std::sort(ds.begin(), ds.end());
  return FieldSpec(ds);  // re-validates coprimality
}

std::string FieldSpec::str() const {
  std::string s = "Q(";
  for (std::size_t i = 0; i < radicands.size(); ++i) {
    if (i) s += ",";
    s += "sqrt" + std::to_string(radicands[i]);
  }
  return s + ")";
}

Scalar::Scalar(FieldSpec f, std::vector<Rat> coeffs) : field_(std::move(f)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != field_.dim()) throw std::invalid_argument("coefficient count != field dimension");
  for (auto& c : coeffs_) c.canonicalize();
}

Scalar Scalar::rational(const FieldSpec& f, const Rat& v) {
  std::vector<Rat> c(f.dim(), Rat(0));
  c[0] = v;
  return Scalar(f, std::move(c));
}

Scalar Scalar::basis_root(const FieldSpec& f, unsigned subset) {
  if (subset >= f.dim()) throw std::invalid_argument("basis subset out of range");
  std::vector<Rat> c(f.dim(), Rat(0));
  c[subset] = 1;
  return Scalar(f, std::move(c));
}

Scalar Scalar::root_of(const FieldSpec& f, long d) {
  for (unsigned s = 0; s < f.dim(); ++s) {
    if (f.basis_radicand(s) == d) return basis_root(f, s);
  }
  throw std::invalid_argument("sqrt(" + std::to_string(d) + ") not in " + f.str());
}

bool Scalar::is_zero() const {
  for (const auto& c : coeffs_) {
    if (sgn(c) != 0) return false;
  }
  return true;
}

bool Scalar::is_rational() const {
  for (std::size_t s = 1; s < coeffs_.size(); ++s) {
    if (sgn(coeffs_[s]) != 0) return false;
  }
  return true;
}

Rat Scalar::rational_value() const {
  if (!is_rational()) throw std::domain_error("scalar is irrational: " + str());
  return coeffs_[0];
}

Scalar Scalar::lift(const FieldSpec& bigger) const {
  if (field_ == bigger) return *this;
  if (!bigger.contains(field_)) throw FieldMismatch("cannot embed " + field_.str() + " into " + bigger.str());
  // bit position of each small radicand inside the big field
  std::vector<unsigned> pos(field_.count());
  for (std::size_t i = 0; i < field_.count(); ++i) {
    auto it = std::find(bigger.radicands.begin(), bigger.radicands.end(), field_.radicands[i]);
    pos[i] = static_cast<unsigned>(it - bigger.radicands.begin());
  }
  std::vector<Rat> out(bigger.dim(), Rat(0));
  for (unsigned s = 0; s < field_.dim(); ++s) {
    if (sgn(coeffs_[s]) == 0) continue;
    unsigned t = 0;
    for (std::size_t i = 0; i < field_.count(); ++i) {
      if (s & (1u << i)) t |= 1u << pos[i];
    }
    out[t] = coeffs_[s];
  }
  return Scalar(bigger, std::move(out));
}

void Scalar::align(Scalar& a, Scalar& b) {
  if (a.field_ == b.field_) return;
  if (a.field_.contains(b.field_)) {
    b = b.lift(a.field_);
  } else if (b.field_.contains(a.field_)) {
    a = a.lift(b.field_);
  } else {
    throw FieldMismatch("field mismatch: " + a.field_.str() + " vs " + b.field_.str());
  }
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

Scalar operator+(const Scalar& a, const Scalar& b) {
  Scalar x = a, y = b;
  Scalar::align(x, y);
  for (std::size_t i = 0; i < x.coeffs_.size(); ++i) x.coeffs_[i] += y.coeffs_[i];
  return x;
}

Scalar operator-(const Scalar& a, const Scalar& b) {
  Scalar x = a, y = b;
  Scalar::align(x, y);
  for (std::size_t i = 0; i < x.coeffs_.size(); ++i) x.coeffs_[i] -= y.coeffs_[i];
  return x;
}

Scalar operator*(const Scalar& a, const Scalar& b) {
  Scalar x = a, y = b;
  Scalar::align(x, y);
  const FieldSpec& f = x.field_;
  const unsigned n = static_cast<unsigned>(f.dim());
  std::vector<Rat> out(n, Rat(0));
  for (unsigned s = 0; s < n; ++s) {
    if (sgn(x.coeffs_[s]) == 0) continue;
    for (unsigned t = 0; t < n; ++t) {
      if (sgn(y.coeffs_[t]) == 0) continue;
      // sqrt(P_S) * sqrt(P_T) = P_{S&T} * sqrt(P_{S^T})
      long common = f.basis_radicand(s & t);
      out[s ^ t] += x.coeffs_[s] * y.coeffs_[t] * Rat(common);
    }
  }
  return Scalar(f, std::move(out));
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw std::domain_error("division by zero scalar");
  const std::size_t m = field_.count();
  if (m == 0) return Scalar(Rat(1) / coeffs_[0]);
  // split over the top radicand: x = A + B*sqrt(d_m), A,B in the subfield
  FieldSpec sub(std::vector<long>(field_.radicands.begin(), field_.radicands.end() - 1));
  const std::size_t half = field_.dim() / 2;
  std::vector<Rat> lo(coeffs_.begin(), coeffs_.begin() + half);
  std::vector<Rat> hi(coeffs_.begin() + half, coeffs_.end());
  Scalar A(sub, std::move(lo)), B(sub, std::move(hi));
  long d = field_.radicands.back();
  Scalar denom = A * A - Scalar(Rat(d)).lift(sub) * B * B;  // nonzero: basis roots are independent
  Scalar denom_inv = denom.inverse();
  Scalar pa = A * denom_inv, pb = -(B * denom_inv);
  std::vector<Rat> out(field_.dim());
  for (std::size_t i = 0; i < half; ++i) {
    out[i] = pa.coeffs()[i];
    out[half + i] = pb.coeffs()[i];
  }
  return Scalar(field_, std::move(out));
}

Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }

bool operator==(const Scalar& a, const Scalar& b) {
  Scalar x = a, y = b;
  Scalar::align(x, y);
  return x.coeffs_ == y.coeffs_;
}

namespace {

// one directed-rounding evaluation pass; returns -1/+1 if decisive, 0 if not
int interval_sign_pass(const FieldSpec& f, const std::vector<Rat>& coeffs, mpfr_prec_t prec) {
  mpfr_t lo, hi, rlo, rhi, tlo, thi;
  mpfr_inits2(prec, lo, hi, rlo, rhi, tlo, thi, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_zero(lo, 1);
  mpfr_set_zero(hi, 1);
  for (unsigned s = 0; s < f.dim(); ++s) {
    if (sgn(coeffs[s]) == 0) continue;
    long rad = f.basis_radicand(s);
    mpfr_set_si(rlo, rad, MPFR_RNDD);
    mpfr_sqrt(rlo, rlo, MPFR_RNDD);
    mpfr_set_si(rhi, rad, MPFR_RNDU);
    mpfr_sqrt(rhi, rhi, MPFR_RNDU);
    if (sgn(coeffs[s]) > 0) {
      mpfr_mul_q(tlo, rlo, coeffs[s].get_mpq_t(), MPFR_RNDD);
      mpfr_mul_q(thi, rhi, coeffs[s].get_mpq_t(), MPFR_RNDU);
    } else {
      mpfr_mul_q(tlo, rhi, coeffs[s].get_mpq_t(), MPFR_RNDD);
      mpfr_mul_q(thi, rlo, coeffs[s].get_mpq_t(), MPFR_RNDU);
    }
    mpfr_add(lo, lo, tlo, MPFR_RNDD);
    mpfr_add(hi, hi, thi, MPFR_RNDU);
  }
  int out = 0;
  if (mpfr_sgn(lo) > 0) out = 1;
  else if (mpfr_sgn(hi) < 0) out = -1;
  mpfr_clears(lo, hi, rlo, rhi, tlo, thi, static_cast<mpfr_ptr>(nullptr));
  return out;
}

}  // namespace

int Scalar::sign() const {
  if (is_zero()) return 0;  // exact zero certificate: all coefficients vanish
  if (is_rational()) return sgn(coeffs_[0]);
  // a nonzero coefficient vector has a nonzero value (basis roots are
  // Q-independent), so refinement terminates
  for (mpfr_prec_t prec = 64;; prec *= 2) {
    if (int s = interval_sign_pass(field_, coeffs_, prec)) return s;
    if (prec > (mpfr_prec_t{1} << 22)) throw std::logic_error("interval sign refinement ran away");
  }
}

double Scalar::approx() const {
  mpfr_t acc, r, t;
  mpfr_inits2(64, acc, r, t, static_cast<mpfr_ptr>(nullptr));
  mpfr_set_zero(acc, 1);
  for (unsigned s = 0; s < field_.dim(); ++s) {
    if (sgn(coeffs_[s]) == 0) continue;
    mpfr_set_si(r, field_.basis_radicand(s), MPFR_RNDN);
    mpfr_sqrt(r, r, MPFR_RNDN);
    mpfr_mul_q(t, r, coeffs_[s].get_mpq_t(), MPFR_RNDN);
    mpfr_add(acc, acc, t, MPFR_RNDN);
  }
  double out = mpfr_get_d(acc, MPFR_RNDN);
  mpfr_clears(acc, r, t, static_cast<mpfr_ptr>(nullptr));
  return out;
}

std::string Scalar::str() const {
  std::string s;
  bool first = true;
  for (unsigned i = 0; i < field_.dim(); ++i) {
    if (sgn(coeffs_[i]) == 0) continue;
    if (!first) s += " + ";
    s += rat_str(coeffs_[i]);
    if (i) s += "*sqrt" + std::to_string(field_.basis_radicand(i));
    first = false;
  }
  return first ? "0" : s;
}

int cmp(const Scalar& a, const Scalar& b) { return (a - b).sign(); }

Scalar abs(const Scalar& a) { return a.sign() < 0 ? -a : a; }

Scalar cross(const CNum& a, const CNum& b) { return a.re * b.im - a.im * b.re; }

Scalar dot(const CNum& a, const CNum& b) { return a.re * b.re + a.im * b.im; }

Json scalar_to_json(const Scalar& s) {
  Json j;
  j["field"] = s.field().radicands;
  std::vector<std::string> cs;
  cs.reserve(s.coeffs().size());
  for (const auto& c : s.coeffs()) cs.push_back(rat_str(c));
  j["coeffs"] = cs;
  return j;
}

Scalar scalar_from_json(const Json& j) {
  FieldSpec f(j.at("field").get<std::vector<long>>());
  std::vector<Rat> cs;
  for (const auto& e : j.at("coeffs")) cs.push_back(rat_parse(e.get<std::string>()));
  return Scalar(f, std::move(cs));
}

Json cnum_to_json(const CNum& v) { return Json{{"re", scalar_to_json(v.re)}, {"im", scalar_to_json(v.im)}}; }

CNum cnum_from_json(const Json& j) { return CNum(scalar_from_json(j.at("re")), scalar_from_json(j.at("im"))); }

}  // namespace tsurf
