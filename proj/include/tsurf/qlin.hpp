#pragma once

// Rational and integer linear algebra: Q-rank/solve/kernel, row-style Hermite
// normal form with positive pivots, integer kernels (saturated by
// construction), and canonical finitely generated Z-submodules of Q^n.

#include <optional>
#include <vector>

#include "tsurf/exact.hpp"

namespace tsurf {

using QVec = std::vector<Rat>;
using QMat = std::vector<QVec>;
using ZVec = std::vector<Int>;
using ZMat = std::vector<ZVec>;

// rank of the Q-span of the given vectors (rows)
int qrank(QMat rows);

// coefficients expressing target in the span of `vectors`, or nullopt if
// independent; free coefficients are zero
std::optional<QVec> qsolve(const QMat& vectors, const QVec& target);

// basis of { x in Q^n : rows . x = 0 }
QMat qkernel(const QMat& rows);

// canonical row HNF of the row span over Z; zero rows dropped, pivots
// positive, entries above each pivot reduced into [0, pivot)
ZMat hnf_rows(ZMat a);

// row HNF together with a unimodular U such that U * a == [h; zero rows]
struct HnfTransform {
  ZMat h;  // nonzero HNF rows
  ZMat u;  // square unimodular, rows aligned with a's rows (h rows first)
};
HnfTransform hnf_rows_transform(ZMat a);

// basis of { x in Z^n : a . x = 0 }; saturated
ZMat zkernel(const ZMat& a);

// finitely generated Z-submodule of Q^n in canonical (rational HNF) form
class ZModule {
 public:
  ZModule() = default;
  static ZModule from_generators(const QMat& gens, std::size_t ambient_dim);

  std::size_t ambient_dim() const { return ambient_; }
  int rank() const { return static_cast<int>(basis_.size()); }
  const QMat& basis() const { return basis_; }
  bool contains(const QVec& v) const;
  ZModule sum(const ZModule& other) const;
  bool operator==(const ZModule& other) const { return ambient_ == other.ambient_ && basis_ == other.basis_; }

 private:
  std::size_t ambient_ = 0;
  QMat basis_;  // canonical rational HNF rows
};

// flattens scalars to one rational coordinate row over the join of their
// fields (callers pass scalars of compatible fields)
QMat scalar_coeff_rows(const std::vector<Scalar>& xs);

// exact rank of a matrix with multi-quadratic real entries (rank over R)
int field_rank(std::vector<std::vector<Scalar>> rows);

// Q-dimension of the Q-span of {1/w0, 1/w1, 1/w2}; inputs must be positive
int qdim_reciprocals(const Scalar& w0, const Scalar& w1, const Scalar& w2);

// integer relations q with q0/w0 + q1/w1 + q2/w2 = 0 (basis of the
// resonance space); empty when the reciprocals are independent
ZMat reciprocal_resonances(const Scalar& w0, const Scalar& w1, const Scalar& w2);

// determinant and inverse over Q (square matrices)
Rat qdet(QMat m);
QMat qinverse(QMat m);

}  // namespace tsurf
