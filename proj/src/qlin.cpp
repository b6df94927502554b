#include "tsurf/qlin.hpp"

#include <algorithm>

namespace tsurf {

namespace {

std::size_t common_dim(const QMat& rows) {
  if (rows.empty()) return 0;
  std::size_t n = rows[0].size();
  for (const auto& r : rows) {
    if (r.size() != n) throw std::invalid_argument("dimension mismatch");
  }
  return n;
}

// reduced row echelon form in place; returns pivot columns
std::vector<int> rref(QMat& m) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  std::size_t n = m[0].size();
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < m.size(); ++col) {
    std::size_t sel = row;
    while (sel < m.size() && sgn(m[sel][col]) == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[sel], m[row]);
    Rat inv = Rat(1) / m[row][col];
    for (auto& x : m[row]) x *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || sgn(m[r][col]) == 0) continue;
      Rat f = m[r][col];
      for (std::size_t c = 0; c < n; ++c) m[r][c] -= f * m[row][c];
    }
    pivots.push_back(static_cast<int>(col));
    ++row;
  }
  return pivots;
}

}  // namespace

int qrank(QMat rows) {
  common_dim(rows);
  return static_cast<int>(rref(rows).size());
}

std::optional<QVec> qsolve(const QMat& vectors, const QVec& target) {
  const std::size_t k = vectors.size();
  const std::size_t n = target.size();
  for (const auto& v : vectors) {
    if (v.size() != n) throw std::invalid_argument("dimension mismatch");
  }
  // augmented system with vectors as columns
  QMat m(n, QVec(k + 1, Rat(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < k; ++j) m[i][j] = vectors[j][i];
    m[i][k] = target[i];
  }
  std::vector<int> pivots = rref(m);
  if (!pivots.empty() && pivots.back() == static_cast<int>(k)) return std::nullopt;  // inconsistent
  QVec coeffs(k, Rat(0));
  for (std::size_t r = 0; r < pivots.size(); ++r) coeffs[pivots[r]] = m[r][k];
  return coeffs;
}

QMat qkernel(const QMat& rows) {
  std::size_t n = common_dim(rows);
  QMat m = rows;
  std::vector<int> pivots = rref(m);
  std::vector<bool> is_pivot(n, false);
  for (int p : pivots) is_pivot[p] = true;
  QMat basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    QVec v(n, Rat(0));
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

namespace {

std::size_t zdim(const ZMat& a) {
  if (a.empty()) return 0;
  std::size_t n = a[0].size();
  for (const auto& r : a) {
    if (r.size() != n) throw std::invalid_argument("dimension mismatch");
  }
  return n;
}

void row_axpy(ZVec& dst, const ZVec& src, const Int& f) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += f * src[i];
}

// echelonize integer rows in place (with optional transform rows u kept in
// lockstep); returns number of nonzero rows
std::size_t hnf_core(ZMat& a, ZMat* u) {
  if (a.empty()) return 0;
  std::size_t n = a[0].size();
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < a.size(); ++col) {
    // gcd sweep: eliminate below until a single nonzero entry remains
    while (true) {
      std::size_t best = a.size();
      for (std::size_t r = row; r < a.size(); ++r) {
        if (sgn(a[r][col]) != 0 && (best == a.size() || cmp(abs(a[r][col]), abs(a[best][col])) < 0)) best = r;
      }
      if (best == a.size()) break;  // column clear
      std::swap(a[row], a[best]);
      if (u) std::swap((*u)[row], (*u)[best]);
      bool clean = true;
      for (std::size_t r = row + 1; r < a.size(); ++r) {
        if (sgn(a[r][col]) == 0) continue;
        Int q = a[r][col] / a[row][col];  // truncated division is fine for the sweep
        if (sgn(q) != 0) {
          row_axpy(a[r], a[row], -q);
          if (u) row_axpy((*u)[r], (*u)[row], -q);
        }
        if (sgn(a[r][col]) != 0) clean = false;
      }
      if (clean) break;
    }
    if (sgn(a[row][col]) == 0) continue;
    if (sgn(a[row][col]) < 0) {
      for (auto& x : a[row]) x = -x;
      if (u) for (auto& x : (*u)[row]) x = -x;
    }
    // reduce entries above the pivot into [0, pivot)
    for (std::size_t r = 0; r < row; ++r) {
      if (sgn(a[r][col]) == 0) continue;
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), a[r][col].get_mpz_t(), a[row][col].get_mpz_t());
      if (sgn(q) != 0) {
        row_axpy(a[r], a[row], -q);
        if (u) row_axpy((*u)[r], (*u)[row], -q);
      }
    }
    ++row;
  }
  return row;
}

}  // namespace

ZMat hnf_rows(ZMat a) {
  zdim(a);
  std::size_t r = hnf_core(a, nullptr);
  a.resize(r);
  return a;
}

HnfTransform hnf_rows_transform(ZMat a) {
  zdim(a);
  ZMat u(a.size(), ZVec(a.size(), Int(0)));
  for (std::size_t i = 0; i < a.size(); ++i) u[i][i] = 1;
  std::size_t r = hnf_core(a, &u);
  a.resize(r);
  return HnfTransform{std::move(a), std::move(u)};
}

ZMat zkernel(const ZMat& a) {
  std::size_t n = zdim(a);
  if (a.empty()) throw std::invalid_argument("zkernel needs the ambient dimension from at least one row");
  // transpose, then unimodular row reduction: rows of U matching zero rows of
  // the echelon form are a (saturated) kernel basis
  ZMat at(n, ZVec(a.size(), Int(0)));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < n; ++j) at[j][i] = a[i][j];
  }
  HnfTransform t = hnf_rows_transform(std::move(at));
  ZMat kernel;
  for (std::size_t r = t.h.size(); r < n; ++r) kernel.push_back(t.u[r]);
  return hnf_rows(std::move(kernel));  // canonical form
}

ZModule ZModule::from_generators(const QMat& gens, std::size_t ambient_dim) {
  for (const auto& g : gens) {
    if (g.size() != ambient_dim) throw std::invalid_argument("dimension mismatch");
  }
  ZModule m;
  m.ambient_ = ambient_dim;
  if (gens.empty()) return m;
  Int den(1);
  for (const auto& g : gens) {
    for (const auto& x : g) {
      Int d = x.get_den();
      den = lcm(den, d);
    }
  }
  ZMat zg(gens.size(), ZVec(ambient_dim));
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (std::size_t j = 0; j < ambient_dim; ++j) {
      Rat scaled = gens[i][j] * Rat(den);
      zg[i][j] = scaled.get_num();  // canonical, denominator 1
    }
  }
  ZMat h = hnf_rows(std::move(zg));
  m.basis_.reserve(h.size());
  for (auto& row : h) {
    QVec q(ambient_dim);
    for (std::size_t j = 0; j < ambient_dim; ++j) {
      q[j] = Rat(row[j]) / Rat(den);
      q[j].canonicalize();
    }
    m.basis_.push_back(std::move(q));
  }
  return m;
}

bool ZModule::contains(const QVec& v) const {
  if (v.size() != ambient_) throw std::invalid_argument("dimension mismatch");
  QVec w = v;
  for (const auto& row : basis_) {
    std::size_t p = 0;
    while (p < ambient_ && sgn(row[p]) == 0) ++p;
    if (p == ambient_) continue;
    if (sgn(w[p]) == 0) continue;
    Rat c = w[p] / row[p];
    if (!rat_is_integer(c)) return false;
    for (std::size_t j = 0; j < ambient_; ++j) w[j] -= c * row[j];
  }
  for (const auto& x : w) {
    if (sgn(x) != 0) return false;
  }
  return true;
}

ZModule ZModule::sum(const ZModule& other) const {
  if (ambient_ != other.ambient_) throw std::invalid_argument("dimension mismatch");
  QMat gens = basis_;
  gens.insert(gens.end(), other.basis_.begin(), other.basis_.end());
  return from_generators(gens, ambient_);
}

QMat scalar_coeff_rows(const std::vector<Scalar>& xs) {
  FieldSpec f;
  for (const auto& x : xs) f = FieldSpec::join(f, x.field());
  QMat rows;
  rows.reserve(xs.size());
  for (const auto& x : xs) rows.push_back(x.lift(f).coeffs());
  return rows;
}

int field_rank(std::vector<std::vector<Scalar>> rows) {
  if (rows.empty()) return 0;
  std::size_t n = rows[0].size();
  for (const auto& r : rows) {
    if (r.size() != n) throw std::invalid_argument("dimension mismatch");
  }
  int rank = 0;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < rows.size(); ++col) {
    std::size_t sel = row;
    while (sel < rows.size() && rows[sel][col].is_zero()) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[sel], rows[row]);
    Scalar inv = rows[row][col].inverse();
    for (auto& x : rows[row]) x = x * inv;
    for (std::size_t r = row + 1; r < rows.size(); ++r) {
      if (rows[r][col].is_zero()) continue;
      Scalar f = rows[r][col];
      for (std::size_t c = col; c < n; ++c) rows[r][c] = rows[r][c] - f * rows[row][c];
    }
    ++rank;
    ++row;
  }
  return rank;
}

namespace {

QMat reciprocal_rows(const Scalar& w0, const Scalar& w1, const Scalar& w2) {
  for (const Scalar* w : {&w0, &w1, &w2}) {
    if (w->sign() <= 0) throw std::domain_error("circumference must be positive");
  }
  return scalar_coeff_rows({w0.inverse(), w1.inverse(), w2.inverse()});
}

}  // namespace

int qdim_reciprocals(const Scalar& w0, const Scalar& w1, const Scalar& w2) {
  return qrank(reciprocal_rows(w0, w1, w2));
}

ZMat reciprocal_resonances(const Scalar& w0, const Scalar& w1, const Scalar& w2) {
  QMat rows = reciprocal_rows(w0, w1, w2);
  // relation space = kernel of q -> q . rows
  std::size_t n = rows[0].size();
  QMat eqs(n, QVec(3));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < 3; ++i) eqs[j][i] = rows[i][j];
  }
  QMat ker = qkernel(eqs);
  ZMat out;
  for (const auto& v : ker) {
    Int den(1);
    for (const auto& x : v) {
      Int d = x.get_den();
      den = lcm(den, d);
    }
    ZVec z(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) z[i] = Rat(v[i] * Rat(den)).get_num();
    out.push_back(std::move(z));
  }
  return hnf_rows(std::move(out));
}

Rat qdet(QMat m) {
  std::size_t n = m.size();
  for (const auto& r : m) {
    if (r.size() != n) throw std::invalid_argument("square matrix required");
  }
  Rat det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t sel = col;
    while (sel < n && sgn(m[sel][col]) == 0) ++sel;
    if (sel == n) return Rat(0);
    if (sel != col) {
      std::swap(m[sel], m[col]);
      det = -det;
    }
    det *= m[col][col];
    Rat inv = Rat(1) / m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (sgn(m[r][col]) == 0) continue;
      Rat f = m[r][col] * inv;
      for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return det;
}

QMat qinverse(QMat m) {
  std::size_t n = m.size();
  for (auto& r : m) {
    if (r.size() != n) throw std::invalid_argument("square matrix required");
    r.resize(2 * n, Rat(0));
  }
  for (std::size_t i = 0; i < n; ++i) m[i][n + i] = 1;
  std::vector<int> pivots = rref(m);
  if (pivots.size() != n || pivots.back() != static_cast<int>(n - 1)) throw std::domain_error("singular matrix");
  QMat inv(n, QVec(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) inv[i][j] = m[i][n + j];
  }
  return inv;
}

}  // namespace tsurf
