#pragma once

// Topological closures of finitely generated subgroups of R and R^2 with
// multi-quadratic coordinates: the closure is a point/line/plane component
// plus a transverse lattice of rank <= 2, computed by the annihilator
// (bipolar) method over the rational coefficient basis.

#include <optional>
#include <vector>

#include "tsurf/exact.hpp"
#include "tsurf/qlin.hpp"

namespace tsurf {

struct Surface;

struct Closure1 {
  bool dense = false;
  Scalar generator;  // valid when discrete; generates exactly the subgroup
};

Closure1 closure_1d(const std::vector<Scalar>& generators);

struct ClosureClass {
  enum class Kind { point, line, plane };
  Kind kind = Kind::point;
  CNum line_dir;                  // nonzero when kind == line
  std::vector<CNum> lattice;      // transverse lattice generators (0..2)
  std::vector<CNum> annihilator;  // generators of the dual group G*

  bool is_discrete() const { return kind == Kind::point; }
  bool is_dense() const { return kind == Kind::plane; }
  bool member(const CNum& v) const;
  bool contains(const ClosureClass& other) const;
  bool same(const ClosureClass& other) const { return contains(other) && other.contains(*this); }
  Json to_json() const;
};

ClosureClass closure_2d(const std::vector<CNum>& generators);

struct Lattice2 {
  CNum a, b;  // R-independent (checked by users via cross != 0)
  std::vector<CNum> generators() const { return {a, b}; }
};

struct PartnerReport {
  bool all_discrete = false;
  int partner_j = -1;            // least j >= 2 with L_1 + L_j non-discrete (1-based)
  std::optional<int> dense_k;    // least k >= 2 with L_1 + L_j + L_k dense
  ClosureClass full;             // closure of the whole sum
};

PartnerReport lattice_partner_search(const std::vector<Lattice2>& lattices);

struct PerClosureReport {
  ClosureClass cls;
  Scalar area;
  bool omega_lambda_check = false;
  std::vector<CNum> per_generators;
};

PerClosureReport per_closure_class(const Surface& s);

}  // namespace tsurf
