#include "tsurf/surface.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace tsurf {

int Surface::poly_index(const std::string& id) const {
  for (std::size_t i = 0; i < polys.size(); ++i) {
    if (polys[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

// --- direction predicates ----------------------------------------------------

bool same_dir(const CNum& a, const CNum& b) {
  return cross(a, b).sign() == 0 && dot(a, b).sign() > 0;
}

namespace {

// 0: u parallel to a, same direction; 1: strictly ccw within half turn;
// 2: opposite; 3: strictly cw within half turn
int sector_rel(const CNum& a, const CNum& u) {
  int cr = cross(a, u).sign();
  if (cr > 0) return 1;
  if (cr < 0) return 3;
  return dot(a, u).sign() > 0 ? 0 : 2;
}

// compares ccw angular distance from a: -1 when u comes strictly first
int angle_cmp_from(const CNum& a, const CNum& u, const CNum& v) {
  int su = sector_rel(a, u), sv = sector_rel(a, v);
  if (su != sv) return su < sv ? -1 : 1;
  if (su == 0 || su == 2) return 0;
  int cr = cross(u, v).sign();
  if (cr > 0) return -1;
  if (cr < 0) return 1;
  return 0;
}

}  // namespace

bool dir_in_arc(const CNum& a, const CNum& b, const CNum& x) {
  if (same_dir(x, a)) return false;
  if (same_dir(x, b)) return true;
  if (same_dir(a, b)) return false;
  return angle_cmp_from(a, x, b) < 0;
}

// --- vertex classes ----------------------------------------------------------

VertexClasses vertex_classes(const Surface& s) {
  VertexClasses vc;
  vc.corner_class.resize(s.polys.size());
  for (std::size_t p = 0; p < s.polys.size(); ++p) vc.corner_class[p].assign(s.polys[p].size(), -1);

  auto next_ccw = [&](const CornerRef& c) {
    int n = s.polys[c.poly].size();
    EdgeRef in{c.poly, (c.vtx - 1 + n) % n};
    EdgeRef pr = s.partner_of(in);
    return CornerRef{pr.poly, pr.edge};
  };

  // orbits, each started from its lexicographically least corner
  for (std::size_t p = 0; p < s.polys.size(); ++p) {
    for (int v = 0; v < s.polys[p].size(); ++v) {
      if (vc.corner_class[p][v] >= 0) continue;
      int id = static_cast<int>(vc.rotation.size());
      std::vector<CornerRef> orbit;
      CornerRef start{static_cast<int>(p), v};
      CornerRef c = start;
      CornerRef least = start;
      do {
        orbit.push_back(c);
        if (c < least) least = c;
        c = next_ccw(c);
      } while (!(c == start));
      // rotate so the least corner comes first (canonical ids/order)
      auto it = std::find(orbit.begin(), orbit.end(), least);
      std::rotate(orbit.begin(), it, orbit.end());
      for (const auto& cc : orbit) vc.corner_class[cc.poly][cc.vtx] = id;
      vc.rotation.push_back(std::move(orbit));
    }
  }

  // cone angle 2pi(k+1): k+1 rightward germs
  const CNum right(Scalar(1), Scalar(0));
  vc.cone_k.resize(vc.rotation.size());
  for (std::size_t cls = 0; cls < vc.rotation.size(); ++cls) {
    int count = 0;
    for (const auto& c : vc.rotation[cls]) {
      const Polygon& poly = s.polys[c.poly];
      CNum d1 = poly.edge_vec(c.vtx);
      CNum d2 = poly.vertex(c.vtx - 1) - poly.vertex(c.vtx);
      if (same_dir(right, d1)) ++count;
      else if (dir_in_arc(d1, d2, right) && !same_dir(right, d2)) ++count;
    }
    vc.cone_k[cls] = count - 1;
  }

  vc.is_marked.assign(vc.rotation.size(), false);
  for (const auto& m : s.marked) vc.is_marked[vc.cls(m)] = true;
  return vc;
}

std::vector<Germ> germs_at(const Surface& s, const VertexClasses& vc, int cls, const CNum& dir) {
  std::vector<Germ> out;
  for (const auto& c : vc.rotation[cls]) {
    const Polygon& poly = s.polys[c.poly];
    CNum d1 = poly.edge_vec(c.vtx);
    CNum d2 = poly.vertex(c.vtx - 1) - poly.vertex(c.vtx);
    if (same_dir(dir, d1)) {
      out.push_back(Germ{cls, c, dir, true});
    } else if (dir_in_arc(d1, d2, dir) && !same_dir(dir, d2)) {
      out.push_back(Germ{cls, c, dir, false});
    }
  }
  return out;
}

// --- validation ----------------------------------------------------------------

namespace {

int orient(const CNum& a, const CNum& b, const CNum& c) { return cross(b - a, c - a).sign(); }

bool on_segment(const CNum& a, const CNum& b, const CNum& p) {
  if (orient(a, b, p) != 0) return false;
  return dot(p - a, b - a).sign() >= 0 && dot(p - b, a - b).sign() >= 0;
}

// proper or improper intersection of closed segments
bool segments_intersect(const CNum& a, const CNum& b, const CNum& c, const CNum& d) {
  int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

bool polygon_simple(const Polygon& poly, std::string* why) {
  int n = poly.size();
  if (n < 3) {
    *why = "fewer than 3 vertices";
    return false;
  }
  for (int i = 0; i < n; ++i) {
    if (poly.edge_vec(i).is_zero()) {
      *why = "zero-length edge " + std::to_string(i);
      return false;
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      const CNum &a = poly.vertex(i), &b = poly.vertex(i + 1);
      const CNum &c = poly.vertex(j), &d = poly.vertex(j + 1);
      if (adjacent) {
        // consecutive edges may only share the common vertex
        const CNum& shared = (j == i + 1) ? b : a;
        const CNum& tip1 = (j == i + 1) ? a : b;
        const CNum& tip2 = (j == i + 1) ? d : c;
        if (on_segment(c, d, tip1) && !(tip1 == shared)) {
          *why = "edges " + std::to_string(i) + "," + std::to_string(j) + " overlap";
          return false;
        }
        if (on_segment(a, b, tip2) && !(tip2 == shared)) {
          *why = "edges " + std::to_string(i) + "," + std::to_string(j) + " overlap";
          return false;
        }
      } else if (segments_intersect(a, b, c, d)) {
        *why = "edges " + std::to_string(i) + "," + std::to_string(j) + " intersect";
        return false;
      }
    }
  }
  return true;
}

Scalar polygon_area2(const Polygon& poly) {
  Scalar a(0);
  for (int i = 0; i < poly.size(); ++i) a += cross(poly.vertex(i), poly.vertex(i + 1));
  return a;
}

}  // namespace

Scalar surface_area(const Surface& s) {
  Scalar a(0);
  for (const auto& p : s.polys) a += polygon_area2(p);
  return Scalar(Rat(1, 2)) * a;
}

std::vector<Diagnostic> validate_surface(const Surface& s) {
  std::vector<Diagnostic> diags;
  auto bad = [&](const std::string& code, const std::string& detail) { diags.push_back({code, detail}); };

  if (s.polys.empty()) {
    bad("empty", "no polygons");
    return diags;
  }
  for (std::size_t p = 0; p < s.polys.size(); ++p) {
    std::string why;
    if (!polygon_simple(s.polys[p], &why)) {
      bad("polygon_not_simple", s.polys[p].id + ": " + why);
      continue;
    }
    if (polygon_area2(s.polys[p]).sign() <= 0) bad("polygon_orientation", s.polys[p].id + ": not positively oriented");
  }
  if (!diags.empty()) return diags;  // geometric soundness first

  if (s.partner.size() != s.polys.size()) {
    bad("gluing_shape", "partner table size mismatch");
    return diags;
  }
  for (std::size_t p = 0; p < s.polys.size(); ++p) {
    if (static_cast<int>(s.partner[p].size()) != s.polys[p].size()) {
      bad("gluing_shape", s.polys[p].id + ": partner row size mismatch");
      return diags;
    }
  }
  for (std::size_t p = 0; p < s.polys.size(); ++p) {
    for (int e = 0; e < s.polys[p].size(); ++e) {
      EdgeRef here{static_cast<int>(p), e};
      EdgeRef pr = s.partner[p][e];
      if (!pr.valid() || pr.poly >= static_cast<int>(s.polys.size()) || pr.edge >= s.polys[pr.poly].size()) {
        bad("unmatched_edge", s.polys[p].id + " edge " + std::to_string(e));
        continue;
      }
      if (pr == here) {
        bad("self_glued_edge", s.polys[p].id + " edge " + std::to_string(e));
        continue;
      }
      if (!(s.partner_of(pr) == here)) {
        bad("gluing_not_involutive", s.polys[p].id + " edge " + std::to_string(e));
        continue;
      }
      CNum v1 = s.edge_vec(here).lift(s.field);
      CNum v2 = s.edge_vec(pr).lift(s.field);
      if (!((v1 + v2).is_zero())) {
        bad("gluing_vector_mismatch",
            s.polys[p].id + " edge " + std::to_string(e) + " vs " + s.polys[pr.poly].id + " edge " +
                std::to_string(pr.edge));
      }
    }
  }
  if (!diags.empty()) return diags;

  // connectivity
  std::vector<int> uf(s.polys.size());
  std::iota(uf.begin(), uf.end(), 0);
  std::function<int(int)> find = [&](int x) { return uf[x] == x ? x : uf[x] = find(uf[x]); };
  for (std::size_t p = 0; p < s.polys.size(); ++p) {
    for (int e = 0; e < s.polys[p].size(); ++e) uf[find(static_cast<int>(p))] = find(s.partner[p][e].poly);
  }
  for (std::size_t p = 0; p < s.polys.size(); ++p) {
    if (find(static_cast<int>(p)) != find(0)) {
      bad("disconnected", "polygon " + s.polys[p].id + " unreachable from " + s.polys[0].id);
      return diags;
    }
  }

  // labels
  if (s.elabel.size() == s.polys.size()) {
    for (std::size_t p = 0; p < s.polys.size(); ++p) {
      for (int e = 0; e < s.polys[p].size(); ++e) {
        EdgeRef pr = s.partner[p][e];
        if (s.elabel[p][e] != s.elabel[pr.poly][pr.edge]) bad("label_mismatch", s.polys[p].id + " edge " + std::to_string(e));
      }
    }
  } else {
    bad("label_shape", "elabel table size mismatch");
  }

  // marked points must be regular classes
  VertexClasses vc = vertex_classes(s);
  for (const auto& m : s.marked) {
    if (m.poly < 0 || m.poly >= static_cast<int>(s.polys.size()) || m.vtx < 0 || m.vtx >= s.polys[m.poly].size()) {
      bad("marked_ref", "marked corner out of range");
      continue;
    }
    if (vc.cone_k[vc.cls(m)] != 0) bad("marked_singular", "marked point has cone angle != 2pi");
  }

  if (surface_area(s).sign() <= 0) bad("area", "total area not positive");
  return diags;
}

void check_valid(const Surface& s) {
  auto diags = validate_surface(s);
  if (!diags.empty()) {
    std::string msg = "invalid surface:";
    for (const auto& d : diags) msg += " [" + d.code + "] " + d.detail + ";";
    throw std::invalid_argument(msg);
  }
}

BuildOutcome build_surface(Surface raw, bool do_normalize) {
  BuildOutcome out;
  // assign labels when the caller did not provide them
  if (raw.elabel.size() != raw.polys.size()) {
    raw.elabel.assign(raw.polys.size(), {});
    for (std::size_t p = 0; p < raw.polys.size(); ++p) raw.elabel[p].assign(raw.polys[p].size(), -1);
    for (std::size_t p = 0; p < raw.polys.size(); ++p) {
      for (int e = 0; e < raw.polys[p].size(); ++e) {
        if (raw.elabel[p][e] >= 0) continue;
        EdgeRef pr = raw.partner.size() == raw.polys.size() && e < static_cast<int>(raw.partner[p].size())
                         ? raw.partner[p][e]
                         : EdgeRef{};
        long l = raw.fresh_label();
        raw.elabel[p][e] = l;
        if (pr.valid() && pr.poly < static_cast<int>(raw.polys.size()) &&
            pr.edge < static_cast<int>(raw.elabel[pr.poly].size()))
          raw.elabel[pr.poly][pr.edge] = l;
      }
    }
  }
  out.diagnostics = validate_surface(raw);
  if (!out.diagnostics.empty()) return out;
  out.surface = do_normalize ? normalize_surface(std::move(raw)) : std::move(raw);
  return out;
}

// --- topology ------------------------------------------------------------------

TopologyReport topology_report(const Surface& s, const VertexClasses& vc) {
  TopologyReport rep;
  int V = static_cast<int>(vc.rotation.size());
  int E = 0;
  for (const auto& p : s.polys) E += p.size();
  E /= 2;
  int F = static_cast<int>(s.polys.size());
  int chi = V - E + F;
  if ((2 - chi) % 2 != 0) throw std::logic_error("odd Euler characteristic");
  rep.genus = (2 - chi) / 2;
  for (std::size_t cls = 0; cls < vc.rotation.size(); ++cls) {
    if (vc.cone_k[cls] >= 1) rep.zeros.push_back({static_cast<int>(cls), vc.cone_k[cls]});
    if (vc.cone_k[cls] == 0 && vc.is_marked[cls]) ++rep.n_marked;
  }
  for (const auto& z : rep.zeros) rep.signature.push_back(z.order);
  std::sort(rep.signature.rbegin(), rep.signature.rend());
  int total = std::accumulate(rep.signature.begin(), rep.signature.end(), 0);
  if (total != 2 * rep.genus - 2) throw std::logic_error("Gauss-Bonnet violated: sum k_i != 2g-2");
  rep.area = surface_area(s);
  return rep;
}

TopologyReport topology_report(const Surface& s) { return topology_report(s, vertex_classes(s)); }

// --- normalization ---------------------------------------------------------------

namespace {

struct EdgeLoc {
  int poly, edge;
};

// rebuilds partner/elabel tables from a token table (token -> the one or two
// directed edge slots carrying it)
void rebuild_from_tokens(Surface& s, const std::vector<std::vector<long>>& token) {
  std::map<long, std::vector<EdgeLoc>> where;
  for (std::size_t p = 0; p < token.size(); ++p) {
    for (std::size_t e = 0; e < token[p].size(); ++e) {
      where[token[p][e]].push_back({static_cast<int>(p), static_cast<int>(e)});
    }
  }
  s.partner.assign(s.polys.size(), {});
  s.elabel.assign(s.polys.size(), {});
  for (std::size_t p = 0; p < s.polys.size(); ++p) {
    s.partner[p].assign(s.polys[p].size(), EdgeRef{});
    s.elabel[p].assign(s.polys[p].size(), -1);
  }
  for (const auto& [tok, locs] : where) {
    if (locs.size() != 2) throw std::logic_error("edge token not paired");
    s.partner[locs[0].poly][locs[0].edge] = EdgeRef{locs[1].poly, locs[1].edge};
    s.partner[locs[1].poly][locs[1].edge] = EdgeRef{locs[0].poly, locs[0].edge};
    s.elabel[locs[0].poly][locs[0].edge] = tok;
    s.elabel[locs[1].poly][locs[1].edge] = tok;
  }
}

// removes vertex `vtx` from polygon `p`, merging its two adjacent edges;
// returns false if the polygon would degenerate
bool erase_polygon_vertex(Surface& s, std::vector<std::vector<long>>& token, int p, int vtx, long merged_token,
                          std::vector<CornerRef*>& tracked) {
  Polygon& poly = s.polys[p];
  if (poly.size() <= 3) return false;
  poly.v.erase(poly.v.begin() + vtx);
  // edges vtx-1 and vtx merge into one edge, at slot vtx-1 (cyclically)
  std::vector<long>& trow = token[p];
  trow.erase(trow.begin() + vtx);
  int prev = vtx == 0 ? static_cast<int>(trow.size()) - 1 : vtx - 1;
  trow[prev] = merged_token;
  for (auto* c : tracked) {
    if (c->poly == p && c->vtx > vtx) --c->vtx;
    else if (c->poly == p && c->vtx == vtx) throw std::logic_error("tracked corner erased");
  }
  return true;
}

}  // namespace

Surface normalize_surface(Surface s, std::vector<CornerRef>* tracked_in) {
  std::vector<CornerRef*> tracked;
  for (auto& m : s.marked) tracked.push_back(&m);
  if (tracked_in) {
    for (auto& c : *tracked_in) tracked.push_back(&c);
  }

  // token tables mirror elabel but stay unique per undirected edge
  std::vector<std::vector<long>> token = s.elabel;

  bool changed = true;
  while (changed) {
    changed = false;

    // (a) drop collinear flat subdivision vertices (two straight corners)
    VertexClasses vc = vertex_classes(s);
    for (std::size_t cls = 0; cls < vc.rotation.size() && !changed; ++cls) {
      if (vc.cone_k[cls] != 0 || vc.is_marked[cls]) continue;
      if (vc.rotation[cls].size() != 2) continue;
      CornerRef c1 = vc.rotation[cls][0], c2 = vc.rotation[cls][1];
      auto straight = [&](const CornerRef& c) {
        const Polygon& poly = s.polys[c.poly];
        CNum d1 = poly.edge_vec(c.vtx);
        CNum d2 = poly.vertex(c.vtx - 1) - poly.vertex(c.vtx);
        return cross(d1, d2).sign() == 0 && dot(d1, d2).sign() < 0;
      };
      if (!straight(c1) || !straight(c2)) continue;
      if (c1.poly == c2.poly && s.polys[c1.poly].size() <= 4) continue;  // keep polygons non-degenerate
      if (s.polys[c1.poly].size() <= 3 || s.polys[c2.poly].size() <= 3) continue;
      bool track_hit = false;
      for (auto* t : tracked) {
        if ((t->poly == c1.poly && t->vtx == c1.vtx) || (t->poly == c2.poly && t->vtx == c2.vtx)) track_hit = true;
      }
      if (track_hit) continue;
      long tok1 = s.fresh_label();
      long tok2 = s.fresh_label();
      // erase the higher vertex index first when both corners share a polygon
      CornerRef first = c1, second = c2;
      if (c1.poly == c2.poly && c1.vtx < c2.vtx) std::swap(first, second);
      if (!erase_polygon_vertex(s, token, first.poly, first.vtx, tok1, tracked)) continue;
      if (second.poly == first.poly && second.vtx > first.vtx) --second.vtx;
      if (!erase_polygon_vertex(s, token, second.poly, second.vtx, tok2, tracked)) continue;
      // the two merged edges are each other's partner: give them one token
      for (std::size_t pp = 0; pp < token.size(); ++pp) {
        for (std::size_t ee = 0; ee < token[pp].size(); ++ee) {
          if (token[pp][ee] == tok2) token[pp][ee] = tok1;
        }
      }
      rebuild_from_tokens(s, token);
      changed = true;
    }
    if (changed) continue;

    // (c) merge two polygons across a gluing when the union stays simple
    for (std::size_t p = 0; p < s.polys.size() && !changed; ++p) {
      for (int e = 0; e < s.polys[p].size() && !changed; ++e) {
        EdgeRef pr = s.partner[p][e];
        if (pr.poly == static_cast<int>(p)) continue;
        int q = pr.poly, f = pr.edge;
        const Polygon& P = s.polys[p];
        const Polygon& Q = s.polys[q];
        CNum tau = P.vertex(e) - Q.vertex(f + 1);
        Polygon merged;
        merged.id = P.id;
        for (int i = 1; i < P.size(); ++i) merged.v.push_back(P.vertex(e + i));
        merged.v.push_back(P.vertex(e));
        for (int i = 2; i < Q.size(); ++i) merged.v.push_back(Q.vertex(f + i) + tau);
        std::string why;
        if (!polygon_simple(merged, &why)) continue;
        // edge tokens of the merged boundary
        std::vector<long> mtok;
        for (int i = 1; i < P.size(); ++i) mtok.push_back(token[p][(e + i) % P.size()]);
        for (int i = 1; i < Q.size(); ++i) mtok.push_back(token[q][(f + i) % Q.size()]);
        // forward tracked corners before mutating
        for (auto* t : tracked) {
          if (t->poly == static_cast<int>(p)) {
            t->vtx = (t->vtx - (e + 1) + P.size()) % P.size();
            t->poly = -2;  // marks: new polygon, index resolved below
          } else if (t->poly == q) {
            int rel = (t->vtx - (f + 1) + Q.size()) % Q.size();
            // vertex f+1 of Q fuses with vertex e of P (position P.size()-1)
            t->vtx = rel == 0 ? P.size() - 1 : P.size() - 1 + rel;
            if (rel == Q.size() - 1) t->vtx = 0;  // vertex f of Q fuses with start
            t->poly = -2;
          }
        }
        // replace p, drop q
        std::vector<Polygon> new_polys;
        std::vector<std::vector<long>> new_token;
        std::vector<int> old_to_new(s.polys.size(), -1);
        for (std::size_t r = 0; r < s.polys.size(); ++r) {
          if (r == static_cast<std::size_t>(q)) continue;
          old_to_new[r] = static_cast<int>(new_polys.size());
          if (r == p) {
            new_polys.push_back(merged);
            new_token.push_back(mtok);
          } else {
            new_polys.push_back(s.polys[r]);
            new_token.push_back(token[r]);
          }
        }
        for (auto* t : tracked) {
          if (t->poly == -2) t->poly = old_to_new[p];
          else if (t->poly >= 0) t->poly = old_to_new[t->poly];
        }
        s.polys = std::move(new_polys);
        token = std::move(new_token);
        rebuild_from_tokens(s, token);
        changed = true;
      }
    }
  }

  check_valid(s);
  return s;
}

// --- serialization ----------------------------------------------------------------

Json surface_to_json(const Surface& s) {
  Json j;
  j["field"] = s.field.radicands;
  Json polys = Json::array();
  for (const auto& p : s.polys) {
    Json jp;
    jp["id"] = p.id;
    Json vs = Json::array();
    for (const auto& v : p.v) vs.push_back(cnum_to_json(v));
    jp["vertices"] = vs;
    polys.push_back(jp);
  }
  j["polygons"] = polys;
  Json gl = Json::array();
  for (std::size_t p = 0; p < s.polys.size(); ++p) {
    for (int e = 0; e < s.polys[p].size(); ++e) {
      EdgeRef pr = s.partner[p][e];
      if (std::make_pair(static_cast<int>(p), e) < std::make_pair(pr.poly, pr.edge)) {
        gl.push_back(Json::array(
            {Json::array({s.polys[p].id, e}), Json::array({s.polys[pr.poly].id, pr.edge})}));
      }
    }
  }
  j["gluings"] = gl;
  Json mk = Json::array();
  for (const auto& m : s.marked) mk.push_back(Json::array({s.polys[m.poly].id, m.vtx}));
  j["marked"] = mk;
  return j;
}

Surface surface_from_json(const Json& j) {
  Surface s;
  s.field = FieldSpec(j.at("field").get<std::vector<long>>());
  for (const auto& jp : j.at("polygons")) {
    Polygon p;
    p.id = jp.at("id").get<std::string>();
    for (const auto& v : jp.at("vertices")) p.v.push_back(cnum_from_json(v).lift(s.field));
    s.polys.push_back(std::move(p));
  }
  s.partner.assign(s.polys.size(), {});
  for (std::size_t p = 0; p < s.polys.size(); ++p) s.partner[p].assign(s.polys[p].size(), EdgeRef{});
  for (const auto& g : j.at("gluings")) {
    int p = s.poly_index(g.at(0).at(0).get<std::string>());
    int q = s.poly_index(g.at(1).at(0).get<std::string>());
    int e = g.at(0).at(1).get<int>();
    int f = g.at(1).at(1).get<int>();
    if (p < 0 || q < 0) throw std::invalid_argument("gluing references unknown polygon");
    s.partner[p][e] = EdgeRef{q, f};
    s.partner[q][f] = EdgeRef{p, e};
  }
  if (j.contains("marked")) {
    for (const auto& m : j.at("marked")) {
      int p = s.poly_index(m.at(0).get<std::string>());
      if (p < 0) throw std::invalid_argument("marked point references unknown polygon");
      s.marked.push_back(CornerRef{p, m.at(1).get<int>()});
    }
  }
  return s;
}

std::string surface_to_svg(const Surface& s) {
  VertexClasses vc = vertex_classes(s);
  std::ostringstream svg;
  double x_off = 0.0;
  double margin = 0.6;
  std::ostringstream body;
  double total_w = 0, total_h = 0;
  for (std::size_t p = 0; p < s.polys.size(); ++p) {
    const Polygon& poly = s.polys[p];
    double minx = 1e300, maxx = -1e300, miny = 1e300, maxy = -1e300;
    std::vector<std::pair<double, double>> pts;
    for (const auto& v : poly.v) {
      double x = v.re.approx(), y = v.im.approx();
      pts.emplace_back(x, y);
      minx = std::min(minx, x);
      maxx = std::max(maxx, x);
      miny = std::min(miny, y);
      maxy = std::max(maxy, y);
    }
    double ox = x_off - minx;
    body << "<g id=\"" << poly.id << "\">\n<polygon points=\"";
    for (auto [x, y] : pts) body << (x + ox) << "," << (-y) << " ";
    body << "\" fill=\"#eef\" stroke=\"#446\" stroke-width=\"0.02\"/>\n";
    for (int e = 0; e < poly.size(); ++e) {
      EdgeRef pr = s.partner[p][e];
      double mx = (pts[e].first + pts[(e + 1) % poly.size()].first) / 2 + ox;
      double my = -(pts[e].second + pts[(e + 1) % poly.size()].second) / 2;
      body << "<text x=\"" << mx << "\" y=\"" << my << "\" font-size=\"0.18\" fill=\"#933\">" << s.elabel[p][e]
           << "</text>\n";
      (void)pr;
    }
    for (int v = 0; v < poly.size(); ++v) {
      int cls = vc.cls(CornerRef{static_cast<int>(p), v});
      if (vc.cone_k[cls] >= 1) {
        body << "<circle cx=\"" << (pts[v].first + ox) << "\" cy=\"" << (-pts[v].second)
             << "\" r=\"0.05\" fill=\"#000\"/>\n<text x=\"" << (pts[v].first + ox + 0.07) << "\" y=\""
             << (-pts[v].second - 0.05) << "\" font-size=\"0.16\">" << (2 * (vc.cone_k[cls] + 1)) << "pi</text>\n";
      } else if (vc.is_marked[cls]) {
        body << "<circle cx=\"" << (pts[v].first + ox) << "\" cy=\"" << (-pts[v].second)
             << "\" r=\"0.04\" fill=\"none\" stroke=\"#000\" stroke-width=\"0.02\"/>\n";
      }
    }
    body << "</g>\n";
    x_off += (maxx - minx) + margin;
    total_w = x_off;
    total_h = std::max(total_h, maxy - miny);
  }
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-0.5 " << -(total_h + 0.5) << " " << (total_w + 1)
      << " " << (total_h + 1) << "\">\n"
      << body.str() << "</svg>\n";
  return svg.str();
}

}  // namespace tsurf
