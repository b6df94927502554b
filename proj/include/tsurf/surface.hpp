#pragma once

// Translation surfaces as Euclidean polygons glued edge-to-edge by
// translations: validation, cone structure, topology, exact geodesic
// tracing, homology bases with periods and intersection form, polygon
// refinement along geodesic polylines, normalization, translation
// equivalence, and JSON/SVG serialization.

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tsurf/exact.hpp"
#include "tsurf/qlin.hpp"

namespace tsurf {

struct EdgeRef {
  int poly = -1;
  int edge = -1;
  bool valid() const { return poly >= 0; }
  friend bool operator==(const EdgeRef&, const EdgeRef&) = default;
  friend auto operator<=>(const EdgeRef&, const EdgeRef&) = default;
};

struct CornerRef {
  int poly = -1;
  int vtx = -1;
  friend bool operator==(const CornerRef&, const CornerRef&) = default;
  friend auto operator<=>(const CornerRef&, const CornerRef&) = default;
};

struct Polygon {
  std::string id;
  std::vector<CNum> v;  // positively oriented simple polygon

  int size() const { return static_cast<int>(v.size()); }
  const CNum& vertex(int i) const { return v[((i % size()) + size()) % size()]; }
  CNum edge_vec(int i) const { return vertex(i + 1) - vertex(i); }
};

struct Surface {
  FieldSpec field;
  std::vector<Polygon> polys;
  std::vector<std::vector<EdgeRef>> partner;  // partner[p][e]
  std::vector<std::vector<long>> elabel;      // shared label per glued pair
  std::vector<CornerRef> marked;              // retained regular (cone 2pi) points
  long next_label = 0;

  EdgeRef partner_of(const EdgeRef& e) const { return partner[e.poly][e.edge]; }
  CNum edge_vec(const EdgeRef& e) const { return polys[e.poly].edge_vec(e.edge); }
  long fresh_label() { return next_label++; }
  int poly_index(const std::string& id) const;
};

// --- validation -------------------------------------------------------------

struct Diagnostic {
  std::string code;
  std::string detail;
};

struct BuildOutcome {
  std::optional<Surface> surface;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return surface.has_value(); }
};

// validates and normalizes; diagnostics list every violated invariant
BuildOutcome build_surface(Surface raw, bool do_normalize = true);
std::vector<Diagnostic> validate_surface(const Surface& s);
void check_valid(const Surface& s);  // throws std::invalid_argument on violation

// --- direction predicates ---------------------------------------------------

bool same_dir(const CNum& a, const CNum& b);           // parallel, same orientation
bool dir_in_arc(const CNum& a, const CNum& b, const CNum& x);  // x in (a,b] sweeping ccw

// --- cone structure ---------------------------------------------------------

struct VertexClasses {
  std::vector<std::vector<int>> corner_class;      // [poly][vtx] -> class id
  std::vector<std::vector<CornerRef>> rotation;    // class -> corners in ccw order
  std::vector<int> cone_k;                         // class -> k, angle 2pi(k+1)
  std::vector<bool> is_marked;

  int cls(const CornerRef& c) const { return corner_class[c.poly][c.vtx]; }
  bool is_anchor(int cls_id) const { return cone_k[cls_id] >= 1 || is_marked[cls_id]; }
};

VertexClasses vertex_classes(const Surface& s);

// a germ of direction `dir` at a vertex class: either along the corner's
// outgoing edge or strictly inside the corner's wedge
struct Germ {
  int cls = -1;
  CornerRef corner;
  CNum dir;
  bool along_edge = false;
};

std::vector<Germ> germs_at(const Surface& s, const VertexClasses& vc, int cls, const CNum& dir);

// --- topology ---------------------------------------------------------------

struct ZeroInfo {
  int cls;
  int order;  // k >= 1
};

struct TopologyReport {
  int genus = 0;
  std::vector<int> signature;  // zero orders, descending
  Scalar area;
  std::vector<ZeroInfo> zeros;
  int n_marked = 0;
};

Scalar surface_area(const Surface& s);
TopologyReport topology_report(const Surface& s);
TopologyReport topology_report(const Surface& s, const VertexClasses& vc);

// --- exact tracing ----------------------------------------------------------

struct SurfPt {
  int poly = -1;
  CNum pos;
};

struct TracePiece {
  int poly;
  CNum a, b;
};

struct TraceResult {
  enum class End { Completed, HitAnchor, Budget, Error };
  End end = End::Error;
  SurfPt at;
  int cls = -1;  // vertex class when the trace ended at a vertex
  std::vector<TracePiece> pieces;
  int crossings = 0;
  std::string error;
};

struct TraceStart {
  // either a free point with a direction, or a germ at a vertex
  std::optional<SurfPt> pt;
  std::optional<Germ> germ;
};

// traces the straight displacement `disp`; flat vertex classes are passed
// through, anchors (zeros/marked) stop the trace. unbounded=true ignores the
// magnitude of disp and uses it as a direction only.
TraceResult trace_straight(const Surface& s, const VertexClasses& vc, const TraceStart& start, const CNum& disp,
                           bool unbounded = false, int budget = 100000);

bool surf_point_eq(const Surface& s, const VertexClasses& vc, const SurfPt& a, const SurfPt& b);

// --- homology ---------------------------------------------------------------

using Chain = std::map<int, Int>;  // cell id -> coefficient

struct HomologyBasis {
  // 1-cells of the glued complex
  std::vector<EdgeRef> cell_edge;  // canonical directed representative
  std::vector<CNum> cell_vec;
  int absolute_rank = 0;  // 2g
  int relative_rank = 0;  // 2g + n - 1
  std::vector<Chain> basis;     // absolute cycles first, then connecting paths
  std::vector<CNum> periods;    // per basis element
  std::vector<int> base_class;  // P-vertex classes: base_class[0] is the common path origin
  QMat intersection;            // absolute block, 2g x 2g, det +-1

  CNum period_of(const Chain& c) const;
};

HomologyBasis homology_and_periods(const Surface& s);
ZModule per_module(const Surface& s);
ZModule per_module(const HomologyBasis& hb, const FieldSpec& f);
// area recomputed from periods and the intersection form (Riemann identity)
Scalar area_from_periods(const HomologyBasis& hb);

// --- refinement -------------------------------------------------------------

struct CutPath {
  std::vector<TracePiece> pieces;
};

struct CutResult {
  Surface surface;
  // per input path, per piece: the directed sub-edge (piece direction, with
  // the polygon on its left) realizing the piece after cutting
  std::vector<std::vector<EdgeRef>> left_edges;
};

CutResult refine_along(const Surface& s, const std::vector<CutPath>& paths);

// --- normalization ----------------------------------------------------------

// drops collinear subdivision vertices, merges polygons across gluings when
// the union stays simple; forwards marked refs and any tracked corners
Surface normalize_surface(Surface s, std::vector<CornerRef>* tracked = nullptr);

// --- translation equivalence ------------------------------------------------

struct EquivResult {
  bool equivalent = false;
  std::vector<std::pair<int, int>> class_matching;  // s1 class -> s2 class
};

EquivResult translation_equivalent(const Surface& s1, const Surface& s2);

// --- serialization ----------------------------------------------------------

Json surface_to_json(const Surface& s);
Surface surface_from_json(const Json& j);
std::string surface_to_svg(const Surface& s);

}  // namespace tsurf
