#include "tsurf/closure.hpp"

#include <numeric>

#include "tsurf/surface.hpp"

namespace tsurf {

namespace {

bool scalar_is_integer(const Scalar& s) { return s.is_rational() && rat_is_integer(s.rational_value()); }

// pairing <y, v> = y.re*v.re + y.im*v.im (y as a real covector)
Scalar pair_rr(const CNum& y, const CNum& v) { return y.re * v.re + y.im * v.im; }

FieldSpec common_field(const std::vector<CNum>& gens) {
  FieldSpec f;
  for (const auto& g : gens) {
    f = FieldSpec::join(f, g.re.field());
    f = FieldSpec::join(f, g.im.field());
  }
  return f;
}

}  // namespace

Closure1 closure_1d(const std::vector<Scalar>& generators) {
  std::vector<Scalar> nonzero;
  for (const auto& g : generators) {
    if (!g.is_zero()) nonzero.push_back(g);
  }
  Closure1 out;
  if (nonzero.empty()) {
    out.generator = Scalar(0);
    return out;
  }
  QMat rows = scalar_coeff_rows(nonzero);
  int rank = qrank(rows);
  if (rank >= 2) {
    out.dense = true;
    return out;
  }
  // all generators are rational multiples of the first; the subgroup is
  // (gcd of those rationals) * g0
  const Scalar& g0 = nonzero[0];
  QMat ratios;
  for (const auto& g : nonzero) {
    Scalar t = g / g0;
    ratios.push_back({t.rational_value()});
  }
  ZModule m = ZModule::from_generators(ratios, 1);
  Scalar gen = Scalar(m.basis()[0][0]) * g0;
  if (gen.sign() < 0) gen = -gen;
  out.generator = gen;
  return out;
}

bool ClosureClass::member(const CNum& v) const {
  switch (kind) {
    case Kind::plane:
      return true;
    case Kind::point: {
      if (lattice.empty()) return v.is_zero();
      if (lattice.size() == 1) {
        const CNum& w = lattice[0];
        if (cross(v, w).sign() != 0) return false;
        Scalar t = w.re.is_zero() ? v.im / w.im : v.re / w.re;
        if (!w.re.is_zero() && (v.im - t * w.im).sign() != 0) return false;
        return scalar_is_integer(t);
      }
      const CNum& w1 = lattice[0];
      const CNum& w2 = lattice[1];
      Scalar det = cross(w1, w2);
      Scalar a = cross(v, w2) / det;
      Scalar b = cross(w1, v) / det;
      return scalar_is_integer(a) && scalar_is_integer(b);
    }
    case Kind::line: {
      if (lattice.empty()) return cross(v, line_dir).sign() == 0;
      const CNum& w = lattice[0];
      Scalar denom = cross(w, line_dir);
      Scalar n = cross(v, line_dir) / denom;
      return scalar_is_integer(n);
    }
  }
  return false;
}

bool ClosureClass::contains(const ClosureClass& other) const {
  for (const auto& w : other.lattice) {
    if (!member(w)) return false;
  }
  if (other.kind == Kind::line) {
    if (kind == Kind::plane) return true;
    if (kind != Kind::line) return false;
    return cross(line_dir, other.line_dir).sign() == 0;
  }
  if (other.kind == Kind::plane) return kind == Kind::plane;
  return true;
}

Json ClosureClass::to_json() const {
  Json j;
  switch (kind) {
    case Kind::point: j["class"] = "lattice"; break;
    case Kind::line: j["class"] = "line_lattice"; break;
    case Kind::plane: j["class"] = "dense"; break;
  }
  if (kind == Kind::line) j["line"] = cnum_to_json(line_dir);
  Json lat = Json::array();
  for (const auto& w : lattice) lat.push_back(cnum_to_json(w));
  j["lattice"] = lat;
  return j;
}

ClosureClass closure_2d(const std::vector<CNum>& generators) {
  FieldSpec f = common_field(generators);
  const std::size_t D = f.dim();

  // (1) Z-basis of the generated group via HNF on coefficient vectors
  QMat rows;
  for (const auto& g : generators) {
    CNum gg = g.lift(f);
    QVec r = gg.re.coeffs();
    const QVec& ic = gg.im.coeffs();
    r.insert(r.end(), ic.begin(), ic.end());
    rows.push_back(std::move(r));
  }
  ZModule mod = ZModule::from_generators(rows, 2 * D);
  std::vector<CNum> h;
  for (const auto& row : mod.basis()) {
    QVec re(row.begin(), row.begin() + D), im(row.begin() + D, row.end());
    h.emplace_back(Scalar(f, std::move(re)), Scalar(f, std::move(im)));
  }

  ClosureClass out;
  auto finish = [&](ClosureClass c) {
    for (const auto& g : generators) {
      if (!c.member(g)) throw std::logic_error("closure_2d: generator escaped its closure");
    }
    return c;
  };

  // (2) dimension of the R-span
  if (h.empty()) return finish(out);  // {0}
  int rdim = 1;
  for (std::size_t i = 1; i < h.size(); ++i) {
    if (cross(h[0], h[i]).sign() != 0) {
      rdim = 2;
      break;
    }
  }
  if (rdim == 1) {
    const CNum dir = h[0];
    std::vector<Scalar> ts;
    for (const auto& hi : h) ts.push_back(dir.re.is_zero() ? hi.im / dir.im : hi.re / dir.re);
    Closure1 c1 = closure_1d(ts);
    if (c1.dense) {
      out.kind = ClosureClass::Kind::line;
      out.line_dir = dir;
    } else {
      out.lattice.push_back(c1.generator * dir);
    }
    return finish(out);
  }

  // (3) rational points of the image plane P = { (<y,h_i>)_i : y in R^2 }:
  // vanishing of all 3x3 minors of [u v z] splits over the field basis into
  // rational equations for z
  const std::size_t r = h.size();
  std::vector<Scalar> u(r), v(r);
  for (std::size_t i = 0; i < r; ++i) {
    u[i] = h[i].re;
    v[i] = h[i].im;
  }
  QMat eqs;
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = i + 1; j < r; ++j) {
      for (std::size_t k = j + 1; k < r; ++k) {
        // det [u v z] rows i,j,k = z_i*m_jk - z_j*m_ik + z_k*m_ij
        Scalar mjk = (u[j] * v[k] - u[k] * v[j]).lift(f);
        Scalar mik = (u[i] * v[k] - u[k] * v[i]).lift(f);
        Scalar mij = (u[i] * v[j] - u[j] * v[i]).lift(f);
        for (std::size_t s = 0; s < D; ++s) {
          QVec eq(r, Rat(0));
          eq[i] = mjk.coeffs()[s];
          eq[j] = -mik.coeffs()[s];
          eq[k] = mij.coeffs()[s];
          if (sgn(eq[i]) || sgn(eq[j]) || sgn(eq[k])) eqs.push_back(std::move(eq));
        }
      }
    }
  }
  ZMat lattice_zr;
  if (eqs.empty()) {
    // r == 2: P is the whole plane, Z^r itself
    lattice_zr = ZMat(r, ZVec(r, Int(0)));
    for (std::size_t i = 0; i < r; ++i) lattice_zr[i][i] = 1;
  } else {
    ZMat zeqs;
    for (const auto& eq : eqs) {
      Int den(1);
      for (const auto& x : eq) {
        Int d = x.get_den();
        den = lcm(den, d);
      }
      ZVec z(r);
      for (std::size_t i = 0; i < r; ++i) z[i] = Rat(eq[i] * Rat(den)).get_num();
      zeqs.push_back(std::move(z));
    }
    lattice_zr = zkernel(zeqs);
  }
  const std::size_t s_rank = lattice_zr.size();
  if (s_rank > 2) throw std::logic_error("closure_2d: annihilator rank > 2");

  // (4) pull back through the injective map y -> (<y,h_i>)_i
  std::size_t a = 0, b = 1;
  while (cross(h[a], h[b]).sign() == 0) ++b;  // exists, rdim == 2
  Scalar det = cross(h[a], h[b]);
  std::vector<CNum> gstar;
  for (const auto& z : lattice_zr) {
    Scalar za = Scalar(Rat(z[a])).lift(f), zb = Scalar(Rat(z[b])).lift(f);
    // solve y.re*h.re + y.im*h.im = z for rows a,b
    CNum y((za * v[b] - zb * v[a]) / det, (u[a] * zb - u[b] * za) / det);
    for (std::size_t i = 0; i < r; ++i) {
      Scalar zi = Scalar(Rat(z[i])).lift(f);
      if ((pair_rr(y, h[i]) - zi).sign() != 0) throw std::logic_error("closure_2d: pullback check failed");
    }
    gstar.push_back(y);
  }

  // (5) bipolar
  if (s_rank == 0) {
    out.kind = ClosureClass::Kind::plane;
  } else if (s_rank == 1) {
    const CNum& y = gstar[0];
    out.kind = ClosureClass::Kind::line;
    out.line_dir = CNum(-y.im, y.re);
    Scalar n2 = pair_rr(y, y);
    out.lattice.push_back(CNum(y.re / n2, y.im / n2));
  } else {
    const CNum& y1 = gstar[0];
    const CNum& y2 = gstar[1];
    Scalar d = y1.re * y2.im - y1.im * y2.re;  // invertible: y1, y2 R-independent
    out.kind = ClosureClass::Kind::point;
    out.lattice.push_back(CNum(y2.im / d, -y2.re / d));   // <.,y1>=1, <.,y2>=0
    out.lattice.push_back(CNum(-y1.im / d, y1.re / d));   // <.,y1>=0, <.,y2>=1
  }
  out.annihilator = gstar;
  return finish(out);
}

PartnerReport lattice_partner_search(const std::vector<Lattice2>& lattices) {
  if (lattices.size() < 2) throw std::invalid_argument("need at least two lattices");
  for (const auto& l : lattices) {
    if (cross(l.a, l.b).sign() == 0) throw std::invalid_argument("malformed lattice: R-dependent basis");
  }
  const int g = static_cast<int>(lattices.size());
  std::vector<CNum> all;
  for (const auto& l : lattices) {
    all.push_back(l.a);
    all.push_back(l.b);
  }
  PartnerReport rep;
  rep.full = closure_2d(all);
  if (rep.full.is_discrete()) {
    rep.all_discrete = true;
    return rep;
  }
  for (int j = 2; j <= g; ++j) {
    std::vector<CNum> pair = lattices[0].generators();
    auto gj = lattices[j - 1].generators();
    pair.insert(pair.end(), gj.begin(), gj.end());
    if (!closure_2d(pair).is_discrete()) {
      rep.partner_j = j;
      break;
    }
  }
  if (rep.partner_j < 0) throw std::logic_error("non-discrete sum without a non-discrete pair");
  if (rep.full.is_dense()) {
    for (int k = 2; k <= g; ++k) {
      std::vector<CNum> triple = lattices[0].generators();
      auto gj = lattices[rep.partner_j - 1].generators();
      auto gk = lattices[k - 1].generators();
      triple.insert(triple.end(), gj.begin(), gj.end());
      triple.insert(triple.end(), gk.begin(), gk.end());
      if (closure_2d(triple).is_dense()) {
        rep.dense_k = k;
        break;
      }
    }
    if (!rep.dense_k) throw std::logic_error("dense sum without a dense triple");
  }
  return rep;
}

PerClosureReport per_closure_class(const Surface& s) {
  HomologyBasis hb = homology_and_periods(s);
  PerClosureReport rep;
  rep.per_generators.assign(hb.periods.begin(), hb.periods.begin() + hb.absolute_rank);
  rep.cls = closure_2d(rep.per_generators);
  rep.area = surface_area(s);
  rep.omega_lambda_check = true;
  if (rep.cls.kind == ClosureClass::Kind::line && !rep.cls.annihilator.empty()) {
    // transverse projections <gen, y> must generate Z
    const CNum& y = rep.cls.annihilator[0];
    Int g(0);
    for (const auto& p : rep.per_generators) {
      Scalar t = y.re * p.re + y.im * p.im;
      if (!t.is_rational() || !rat_is_integer(t.rational_value()))
        throw std::logic_error("per_closure_class: non-integer transverse projection");
      Int n = t.rational_value().get_num();
      g = gcd(g, n);
    }
    rep.omega_lambda_check = (cmp(abs(Scalar(Rat(g))), Scalar(1)) == 0);
  }
  return rep;
}

}  // namespace tsurf
