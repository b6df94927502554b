#include "tsurf/surface.hpp"

namespace tsurf {

namespace {

struct Location {
  enum class Kind { Interior, OnEdge, AtVertex } kind;
  int index = -1;  // edge or vertex index
};

Location locate_in_polygon(const Polygon& poly, const CNum& x) {
  for (int v = 0; v < poly.size(); ++v) {
    if (poly.vertex(v) == x) return {Location::Kind::AtVertex, v};
  }
  for (int e = 0; e < poly.size(); ++e) {
    const CNum &a = poly.vertex(e), &b = poly.vertex(e + 1);
    if (cross(b - a, x - a).sign() == 0 && dot(x - a, b - a).sign() > 0 && dot(x - b, a - b).sign() > 0)
      return {Location::Kind::OnEdge, e};
  }
  return {Location::Kind::Interior, -1};
}

// first boundary contact of the ray x + t*d, t in (0, cap]; cap < 0 means
// unbounded. Returns t, or nullopt if the capped segment stays interior.
struct RayHit {
  Scalar t;
  bool at_vertex;
  int index;  // vertex or edge index
};

std::optional<RayHit> first_boundary_hit(const Polygon& poly, const CNum& x, const CNum& d, const Scalar* cap) {
  std::optional<RayHit> best;
  auto consider = [&](const Scalar& t, bool at_vertex, int index) {
    if (t.sign() <= 0) return;
    if (cap && (t - *cap).sign() > 0) return;
    if (!best || (t - best->t).sign() < 0) best = RayHit{t, at_vertex, index};
    else if (best && (t - best->t).sign() == 0 && at_vertex && !best->at_vertex) best = RayHit{t, at_vertex, index};
  };
  for (int e = 0; e < poly.size(); ++e) {
    const CNum &a = poly.vertex(e), &b = poly.vertex(e + 1);
    CNum u = b - a;
    Scalar det = cross(d, u);
    if (det.sign() == 0) {
      // parallel; collinear overlap surfaces as endpoint hits
      if (cross(a - x, d).sign() != 0) continue;
      Scalar dd = dot(d, d);
      consider(dot(a - x, d) / dd, true, e);
      consider(dot(b - x, d) / dd, true, (e + 1) % poly.size());
      continue;
    }
    Scalar t = cross(a - x, u) / det;
    Scalar sp = cross(a - x, d) / det;
    int ss = sp.sign();
    if (ss < 0 || (sp - Scalar(1)).sign() > 0) continue;
    if (ss == 0) consider(t, true, e);
    else if ((sp - Scalar(1)).sign() == 0) consider(t, true, (e + 1) % poly.size());
    else consider(t, false, e);
  }
  return best;
}

}  // namespace

TraceResult trace_straight(const Surface& s, const VertexClasses& vc, const TraceStart& start, const CNum& disp,
                           bool unbounded, int budget) {
  TraceResult res;
  if (disp.is_zero()) {
    res.end = TraceResult::End::Error;
    res.error = "zero displacement";
    return res;
  }
  const CNum d = disp;  // direction
  CNum rem = disp;      // remaining displacement (ignored when unbounded)

  int p = -1;
  CNum x;
  enum class Mode { Dispatch, Interior, AlongEdge, AtVertex } mode = Mode::Dispatch;
  int edge = -1;  // AlongEdge: current edge in p

  auto fail = [&](const std::string& why) {
    res.end = TraceResult::End::Error;
    res.error = why;
    res.at = SurfPt{p, x};
    return res;
  };

  // choose the corner of a flat class whose wedge contains d
  auto enter_vertex_class = [&](int cls) -> bool {
    for (const auto& c : vc.rotation[cls]) {
      const Polygon& poly = s.polys[c.poly];
      CNum d1 = poly.edge_vec(c.vtx);
      CNum d2 = poly.vertex(c.vtx - 1) - poly.vertex(c.vtx);
      if (same_dir(d, d1)) {
        p = c.poly;
        x = poly.vertex(c.vtx);
        edge = c.vtx;
        mode = Mode::AlongEdge;
        return true;
      }
      if (dir_in_arc(d1, d2, d) && !same_dir(d, d2)) {
        p = c.poly;
        x = poly.vertex(c.vtx);
        mode = Mode::Interior;
        return true;
      }
    }
    return false;
  };

  // initialize
  if (start.germ) {
    const Germ& g = *start.germ;
    if (!same_dir(g.dir, d)) return fail("germ direction disagrees with displacement");
    p = g.corner.poly;
    x = s.polys[p].vertex(g.corner.vtx);
    if (g.along_edge) {
      edge = g.corner.vtx;
      mode = Mode::AlongEdge;
    } else {
      mode = Mode::Interior;
    }
  } else if (start.pt) {
    p = start.pt->poly;
    x = start.pt->pos;
    if (p < 0 || p >= static_cast<int>(s.polys.size())) return fail("bad start polygon");
    Location loc = locate_in_polygon(s.polys[p], x);
    if (loc.kind == Location::Kind::AtVertex) {
      int cls = vc.cls(CornerRef{p, loc.index});
      if (vc.is_anchor(cls)) return fail("ambiguous start at singular point; pass a germ");
      if (!enter_vertex_class(cls)) return fail("no wedge contains start direction");
    } else if (loc.kind == Location::Kind::OnEdge) {
      mode = Mode::Dispatch;
      edge = loc.index;
    } else {
      mode = Mode::Interior;
    }
  } else {
    return fail("no start");
  }

  bool moved = false;
  while (true) {
    if (res.crossings > budget) {
      res.end = TraceResult::End::Budget;
      res.at = SurfPt{p, x};
      return res;
    }
    if (!unbounded && rem.is_zero()) {
      res.end = TraceResult::End::Completed;
      res.at = SurfPt{p, x};
      Location loc = locate_in_polygon(s.polys[p], x);
      if (loc.kind == Location::Kind::AtVertex) res.cls = vc.cls(CornerRef{p, loc.index});
      return res;
    }

    if (mode == Mode::Dispatch) {
      // on the interior of `edge`, direction decides how to proceed
      const Polygon& poly = s.polys[p];
      CNum u = poly.edge_vec(edge);
      int c = cross(u, d).sign();
      if (c > 0) {
        mode = Mode::Interior;
      } else if (c < 0 || dot(u, d).sign() < 0) {
        // leaves this polygon (or runs backward along the edge): jump charts
        EdgeRef pr = s.partner[p][edge];
        const Polygon& qoly = s.polys[pr.poly];
        const CNum& a = poly.vertex(edge);
        CNum u2 = qoly.edge_vec(pr.edge);
        // param s on (a,b) maps to param 1-s on the partner
        Scalar t = dot(x - a, u) / dot(u, u);
        x = qoly.vertex(pr.edge) + (Scalar(1) - t) * u2;
        p = pr.poly;
        edge = pr.edge;
        ++res.crossings;
        // re-dispatch in the new chart (no progress consumed)
      } else {
        mode = Mode::AlongEdge;
      }
      continue;
    }

    if (mode == Mode::AlongEdge) {
      const Polygon& poly = s.polys[p];
      CNum endv = poly.vertex(edge + 1) - x;
      Scalar dd = dot(d, d);
      Scalar t_edge = dot(endv, d) / dd;
      Scalar t_cap;
      bool capped = false;
      if (!unbounded) {
        t_cap = dot(rem, d) / dd;
        capped = (t_cap - t_edge).sign() < 0;
      }
      if (capped) {
        CNum step = rem;
        res.pieces.push_back({p, x, x + step});
        x = x + step;
        rem = CNum(Scalar(0), Scalar(0));
        moved = true;
        ++res.crossings;
        res.end = TraceResult::End::Completed;
        res.at = SurfPt{p, x};
        return res;
      }
      CNum step = t_edge * d;
      res.pieces.push_back({p, x, x + step});
      x = x + step;
      if (!unbounded) rem = rem - step;
      moved = true;
      ++res.crossings;
      int v = (edge + 1) % poly.size();
      int cls = vc.cls(CornerRef{p, v});
      if (!unbounded && rem.is_zero()) {
        res.end = TraceResult::End::Completed;
        res.at = SurfPt{p, x};
        res.cls = cls;
        return res;
      }
      if (vc.is_anchor(cls)) {
        res.end = TraceResult::End::HitAnchor;
        res.at = SurfPt{p, x};
        res.cls = cls;
        return res;
      }
      if (!enter_vertex_class(cls)) return fail("no wedge contains direction at flat vertex");
      continue;
    }

    // Interior mode
    {
      const Polygon& poly = s.polys[p];
      Scalar dd = dot(d, d);
      std::optional<Scalar> cap;
      if (!unbounded) cap = dot(rem, d) / dd;
      auto hit = first_boundary_hit(poly, x, d, cap ? &*cap : nullptr);
      if (!hit) {
        if (unbounded) return fail("interior ray found no boundary");
        CNum step = rem;
        res.pieces.push_back({p, x, x + step});
        x = x + step;
        rem = CNum(Scalar(0), Scalar(0));
        moved = true;
        ++res.crossings;
        continue;  // loop reports Completed
      }
      CNum step = hit->t * d;
      res.pieces.push_back({p, x, x + step});
      if (!unbounded) rem = rem - step;
      moved = true;
      ++res.crossings;
      if (hit->at_vertex) {
        x = poly.vertex(hit->index);
        int cls = vc.cls(CornerRef{p, hit->index});
        if (!unbounded && rem.is_zero()) {
          res.end = TraceResult::End::Completed;
          res.at = SurfPt{p, x};
          res.cls = cls;
          return res;
        }
        if (vc.is_anchor(cls)) {
          res.end = TraceResult::End::HitAnchor;
          res.at = SurfPt{p, x};
          res.cls = cls;
          return res;
        }
        if (!enter_vertex_class(cls)) return fail("no wedge contains direction at flat vertex");
      } else {
        x = x + step;
        edge = hit->index;
        mode = Mode::Dispatch;
      }
    }
  }
  (void)moved;
}

bool surf_point_eq(const Surface& s, const VertexClasses& vc, const SurfPt& a, const SurfPt& b) {
  Location la = locate_in_polygon(s.polys[a.poly], a.pos);
  Location lb = locate_in_polygon(s.polys[b.poly], b.pos);
  if (la.kind == Location::Kind::AtVertex || lb.kind == Location::Kind::AtVertex) {
    if (la.kind != lb.kind) return false;
    return vc.cls(CornerRef{a.poly, la.index}) == vc.cls(CornerRef{b.poly, lb.index});
  }
  auto canonical = [&](const SurfPt& pt, const Location& loc) -> SurfPt {
    if (loc.kind != Location::Kind::OnEdge) return pt;
    EdgeRef here{pt.poly, loc.index};
    EdgeRef pr = s.partner_of(here);
    if (std::make_pair(here.poly, here.edge) <= std::make_pair(pr.poly, pr.edge)) return pt;
    const Polygon& poly = s.polys[pt.poly];
    const Polygon& qoly = s.polys[pr.poly];
    CNum u = poly.edge_vec(loc.index);
    Scalar t = dot(pt.pos - poly.vertex(loc.index), u) / dot(u, u);
    return SurfPt{pr.poly, qoly.vertex(pr.edge) + (Scalar(1) - t) * qoly.edge_vec(pr.edge)};
  };
  SurfPt ca = canonical(a, la), cb = canonical(b, lb);
  return ca.poly == cb.poly && ca.pos == cb.pos;
}

}  // namespace tsurf
