#include "bswalk/preactions.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <sstream>

#include "bswalk/detail/text.hpp"
#include "bswalk/errors.hpp"

namespace bswalk {

  ////////////////////////////////////////////////////////////////////////
  // Preaction
  ////////////////////////////////////////////////////////////////////////

  OrbitId Preaction::add_orbit(Label cardinality) {
    Orbit o;
    o.out_slot.assign(static_cast<std::size_t>(wedge(cardinality, _params.n())), no_edge);
    o.in_slot.assign(static_cast<std::size_t>(wedge(cardinality, _params.m())), no_edge);
    o.cardinality = std::move(cardinality);
    _orbits.push_back(std::move(o));
    return _orbits.size() - 1;
  }

  EdgeId Preaction::add_tau_edge(TauEdge e) {
    if (e.src >= _orbits.size() || e.trg >= _orbits.size()) {
      throw InvalidGraph("tau edge endpoint out of range");
    }
    auto& src = _orbits[e.src];
    auto& trg = _orbits[e.trg];
    if (e.src_residue < 0 || static_cast<std::size_t>(e.src_residue) >= src.out_slot.size()) {
      throw InvalidGraph("source residue " + std::to_string(e.src_residue)
                         + " out of range for orbit " + std::to_string(e.src));
    }
    if (e.trg_residue < 0 || static_cast<std::size_t>(e.trg_residue) >= trg.in_slot.size()) {
      throw InvalidGraph("target residue " + std::to_string(e.trg_residue)
                         + " out of range for orbit " + std::to_string(e.trg));
    }
    EdgeId id = _edges.size();

    StoredEdge s{e, static_cast<std::int64_t>(src.out_slot.size()),
                 static_cast<std::int64_t>(trg.in_slot.size()), 0, 0, 0, 0};
    if (src.cardinality.is_finite()) {
      s.src_period  = src.cardinality.value() / s.src_gcd;
      s.src_inverse = inverse_mod(Int(_params.n() / s.src_gcd), s.src_period);
    }
    if (trg.cardinality.is_finite()) {
      s.trg_period  = trg.cardinality.value() / s.trg_gcd;
      s.trg_inverse = inverse_mod(Int(_params.m() / s.trg_gcd), s.trg_period);
      s.data.anchor = floor_mod(s.data.anchor, s.trg_period);
    }
    _edges.push_back(std::move(s));

    auto& out_slot = src.out_slot[static_cast<std::size_t>(e.src_residue)];
    if (out_slot == no_edge) {
      out_slot = id;
    } else {
      _conflicts.push_back("orbit " + std::to_string(e.src) + " outgoing residue "
                           + std::to_string(e.src_residue) + " used by edges "
                           + std::to_string(out_slot) + " and " + std::to_string(id));
    }
    auto& in_slot = trg.in_slot[static_cast<std::size_t>(e.trg_residue)];
    if (in_slot == no_edge) {
      in_slot = id;
    } else {
      _conflicts.push_back("orbit " + std::to_string(e.trg) + " incoming residue "
                           + std::to_string(e.trg_residue) + " used by edges "
                           + std::to_string(in_slot) + " and " + std::to_string(id));
    }
    return id;
  }

  void Preaction::set_basepoint(Point x) {
    if (x.orbit >= _orbits.size()) {
      throw InvalidGraph("basepoint orbit out of range");
    }
    _basepoint = make_point(x.orbit, std::move(x.offset));
  }

  Int Preaction::canonical(OrbitId o, Int offset) const {
    auto const& card = _orbits[o].cardinality;
    if (card.is_finite()) {
      if (offset < 0 || offset >= card.value()) {
        return floor_mod(offset, card.value());
      }
    }
    return offset;
  }

  Point Preaction::make_point(OrbitId o, Int offset) const {
    if (o >= _orbits.size()) {
      throw InvalidGraph("orbit out of range");
    }
    return Point{o, canonical(o, std::move(offset))};
  }

  Point Preaction::shift_b(Point const& x, Int const& e) const {
    return Point{x.orbit, canonical(x.orbit, x.offset + e)};
  }

  EdgeId Preaction::edge_at(Point const& x, int sign) const {
    auto const& o = _orbits[x.orbit];
    if (sign > 0) {
      return o.out_slot[static_cast<std::size_t>(
          floor_mod(x.offset, static_cast<std::int64_t>(o.out_slot.size())))];
    }
    return o.in_slot[static_cast<std::size_t>(
        floor_mod(x.offset, static_cast<std::int64_t>(o.in_slot.size())))];
  }

  Point Preaction::through_edge(EdgeId id, Point const& x, int sign) const {
    auto const& s = _edges[id];
    auto const& e = s.data;
    if (sign > 0) {
      // x = src_residue + k n
      Int k;
      if (s.src_period == 0) {
        k = (x.offset - e.src_residue) / _params.n();
      } else if (s.src_period != 1) {
        k = floor_mod((x.offset - e.src_residue) / s.src_gcd * s.src_inverse, s.src_period);
      }
      return Point{e.trg, canonical(e.trg, e.trg_residue + e.anchor * s.trg_gcd + k * _params.m())};
    }
    // x = trg_residue + anchor g' + k m
    Int rest = x.offset - e.trg_residue - e.anchor * s.trg_gcd;
    Int k;
    if (s.trg_period == 0) {
      k = rest / _params.m();
    } else if (s.trg_period != 1) {
      k = floor_mod(rest / s.trg_gcd * s.trg_inverse, s.trg_period);
    }
    return Point{e.src, canonical(e.src, e.src_residue + k * _params.n())};
  }

  EdgeId Preaction::connect(Point const& x, Point const& y) {
    auto const&  src = _orbits.at(x.orbit);
    auto const&  trg = _orbits.at(y.orbit);
    auto const   g   = static_cast<std::int64_t>(src.out_slot.size());
    auto const   g2  = static_cast<std::int64_t>(trg.in_slot.size());
    std::int64_t s   = floor_mod(x.offset, g);
    std::int64_t r   = floor_mod(y.offset, g2);
    if (src.out_slot[static_cast<std::size_t>(s)] != no_edge
        || trg.in_slot[static_cast<std::size_t>(r)] != no_edge) {
      throw InvalidGraph("residue class already carries an edge");
    }
    if (transfer_ratio(src.cardinality, _params.n()) != transfer_ratio(trg.cardinality, _params.m())) {
      throw InvalidGraph("coset sizes differ across the requested edge");
    }
    // With anchor 0 the edge sends x to y0; y - y0 is a multiple of g'.
    EdgeId id = add_tau_edge(TauEdge{x.orbit, s, y.orbit, r, 0});
    Point  y0 = through_edge(id, x, 1);
    Int    shift = (Int(y.offset) - y0.offset) / g2;
    auto&  stored = _edges[id];
    stored.data.anchor = stored.trg_period == 0 ? shift : floor_mod(shift, stored.trg_period);
    return id;
  }

  std::optional<Point> Preaction::shift_t(Point const& x, int sign) const {
    EdgeId id = edge_at(x, sign);
    if (id == no_edge) {
      return std::nullopt;
    }
    return through_edge(id, x, sign);
  }

  ////////////////////////////////////////////////////////////////////////
  // Validation and quotient
  ////////////////////////////////////////////////////////////////////////

  MnGraph mn_graph_of(Preaction const& a) {
    MnGraph g(a.params());
    for (OrbitId o = 0; o < a.orbit_count(); ++o) {
      g.add_vertex(a.cardinality(o));
    }
    for (EdgeId e = 0; e < a.edge_count(); ++e) {
      g.add_edge(a.tau_edge(e).src, a.tau_edge(e).trg);
    }
    if (a.orbit_count() > 0) {
      g.set_root(a.basepoint().orbit);
    }
    return g;
  }

  ValidationReport validate_preaction(Preaction const& a) {
    auto report = validate(mn_graph_of(a));
    for (auto const& c : a.slot_conflicts()) {
      report.other_violations.push_back("tau not injective: " + c);
    }
    auto const& p = a.params();
    // Commutation x tau b^m = x b^n tau on a window of each coset.  When the
    // coset sizes disagree the same check exposes that tau is ill defined.
    for (EdgeId id = 0; id < a.edge_count(); ++id) {
      auto const& e = a.tau_edge(id);
      for (std::int64_t k = -3; k <= 3; ++k) {
        Point x  = a.make_point(e.src, Int(e.src_residue) + Int(k) * p.n());
        Point y1 = a.shift_b(a.through_edge(id, x, 1), Int(p.m()));
        Point y2 = a.through_edge(id, a.shift_b(x, Int(p.n())), 1);
        Point back = a.through_edge(id, a.through_edge(id, x, 1), -1);
        if (!(y1 == y2) || !(back == x)) {
          report.other_violations.push_back(
              "tau b^m != b^n tau on edge " + std::to_string(id) + " at offset "
              + to_string(x.offset));
          break;
        }
      }
    }
    if (a.orbit_count() > 0 && a.basepoint().orbit >= a.orbit_count()) {
      report.other_violations.push_back("basepoint outside the orbits");
    }
    return report;
  }

  ////////////////////////////////////////////////////////////////////////
  // Words acting on points
  ////////////////////////////////////////////////////////////////////////

  ApplyResult try_apply(Preaction const& a, Point const& x, Word const& w) {
    Point       y = x;
    std::size_t i = 0;
    while (i < w.size()) {
      if (is_t(w[i])) {
        auto next = a.shift_t(y, sign(w[i]));
        if (!next) {
          return {std::nullopt, i};
        }
        y = std::move(*next);
        ++i;
        continue;
      }
      std::int64_t run = 0;
      while (i < w.size() && !is_t(w[i])) {
        run += sign(w[i]);
        ++i;
      }
      y = a.shift_b(y, Int(run));
    }
    return {std::move(y), w.size()};
  }

  Point apply(Preaction const& a, Point const& x, Word const& w) {
    auto r = try_apply(a, x, w);
    if (!r.point) {
      throw Undefined(r.applied);
    }
    return std::move(*r.point);
  }

  ApplyResult try_apply(Preaction const& a, Point const& x, NormalForm const& g) {
    Point       y = a.shift_b(x, g.leading());
    std::size_t i = 0;
    for (auto const& blk : g.blocks()) {
      auto next = a.shift_t(y, blk.sign);
      if (!next) {
        return {std::nullopt, i};
      }
      y = a.shift_b(*next, blk.exponent);
      ++i;
    }
    return {std::move(y), i};
  }

  EdgePath derive_edge_path(Preaction const& a, Point const& x, Word const& w) {
    EdgePath path;
    Point    y = x;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (!is_t(w[i])) {
        y = a.shift_b(y, Int(sign(w[i])));
        continue;
      }
      int    s  = sign(w[i]);
      EdgeId id = a.edge_at(y, s);
      if (id == no_edge) {
        throw Undefined(i);
      }
      y = a.through_edge(id, y, s);
      path.steps.emplace_back(id, s);
    }
    return path;
  }

  ////////////////////////////////////////////////////////////////////////
  // Construction
  ////////////////////////////////////////////////////////////////////////

  Preaction realize(MnGraph const& g) {
    if (g.vertex_count() == 0) {
      throw InvalidGraph("cannot realize an empty graph");
    }
    auto report = validate(g);
    if (!report.valid()) {
      throw InvalidGraph("graph violates degree caps or the transfer equation");
    }
    if (!report.connected) {
      throw InvalidGraph("graph is not connected");
    }
    Preaction a(g.params());
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      a.add_orbit(g.label(v));
    }
    std::vector<std::int64_t> next_out(g.vertex_count(), 0), next_in(g.vertex_count(), 0);
    for (auto const& e : g.edges()) {
      a.add_tau_edge(TauEdge{e.src, next_out[e.src]++, e.trg, next_in[e.trg]++, 0});
    }
    a.set_basepoint(Point{g.root().value_or(0), 0});
    return a;
  }

  Preaction saturate(Preaction const& a, std::size_t depth) {
    if (validate_preaction(a).saturated) {
      throw AlreadySaturated("every residue class already carries an edge");
    }
    LazyAction lazy(a);
    lazy.expand_to_depth(depth);
    return lazy.preaction();
  }

  bool stabilizer_contains(Preaction const& a, Word const& w) {
    LazyAction lazy(a);
    return lazy.apply(a.basepoint(), w) == a.basepoint();
  }

  Preaction restrict_to(Preaction const& a, std::vector<OrbitId> const& orbits) {
    return restrict_to(a, orbits, a.basepoint());
  }

  Preaction restrict_to(Preaction const& a, std::vector<OrbitId> const& orbits,
                        Point const& basepoint) {
    std::vector<std::size_t> index(a.orbit_count(), no_edge);
    Preaction                out(a.params());
    for (OrbitId o : orbits) {
      index.at(o) = out.add_orbit(a.cardinality(o));
    }
    for (EdgeId id = 0; id < a.edge_count(); ++id) {
      TauEdge e = a.tau_edge(id);
      if (index[e.src] != no_edge && index[e.trg] != no_edge) {
        e.src = index[e.src];
        e.trg = index[e.trg];
        out.add_tau_edge(std::move(e));
      }
    }
    if (index.at(basepoint.orbit) == no_edge) {
      throw InvalidGraph("restriction drops the basepoint");
    }
    out.set_basepoint(Point{index[basepoint.orbit], basepoint.offset});
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Serialization
  ////////////////////////////////////////////////////////////////////////

  std::string serialize(Preaction const& a) {
    std::ostringstream out;
    out << "mn-preaction " << a.params().m() << ' ' << a.params().n() << '\n';
    for (OrbitId o = 0; o < a.orbit_count(); ++o) {
      out << "orbit " << o << ' ' << to_string(a.cardinality(o)) << '\n';
    }
    for (EdgeId id = 0; id < a.edge_count(); ++id) {
      out << "e " << a.tau_edge(id).src << ' ' << a.tau_edge(id).trg << '\n';
    }
    for (EdgeId id = 0; id < a.edge_count(); ++id) {
      auto const& e = a.tau_edge(id);
      out << "tau " << id << ' ' << e.src_residue << ' ' << e.trg_residue << ' '
          << to_string(e.anchor) << '\n';
    }
    if (a.orbit_count() > 0) {
      out << "root " << a.basepoint().orbit << '\n';
      out << "base " << to_string(a.basepoint().offset) << '\n';
    }
    return out.str();
  }

  Preaction parse_preaction(std::string_view text) {
    auto lines = detail::content_lines(text);
    if (lines.empty()) {
      throw ParseError("empty preaction description");
    }
    auto header = detail::tokens(lines[0]);
    if (header.size() != 3 || header[0] != "mn-preaction") {
      throw ParseError("expected header 'mn-preaction <m> <n>'");
    }
    Params p(static_cast<std::int64_t>(parse_int(header[1])),
             static_cast<std::int64_t>(parse_int(header[2])));
    std::vector<Label>                       orbits;
    std::vector<Edge>                        edges;
    std::vector<std::optional<std::array<Int, 3>>> taus;
    std::optional<OrbitId>                   root;
    Int                                      base = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      auto tok = detail::tokens(lines[i]);
      if (tok[0] == "orbit" && tok.size() == 3) {
        if (detail::parse_index(tok[1]) != orbits.size()) {
          throw ParseError("orbit ids must be dense and in order: " + lines[i]);
        }
        orbits.push_back(parse_label(tok[2]));
      } else if (tok[0] == "e" && tok.size() == 3) {
        edges.push_back(Edge{detail::parse_index(tok[1]), detail::parse_index(tok[2])});
        taus.emplace_back();
      } else if (tok[0] == "tau" && tok.size() == 5) {
        auto id = detail::parse_index(tok[1]);
        if (id >= taus.size() || taus[id]) {
          throw ParseError("tau line refers to an unknown or repeated edge: " + lines[i]);
        }
        taus[id] = std::array<Int, 3>{parse_int(tok[2]), parse_int(tok[3]), parse_int(tok[4])};
      } else if (tok[0] == "root" && tok.size() == 2) {
        root = detail::parse_index(tok[1]);
      } else if (tok[0] == "base" && tok.size() == 2) {
        base = parse_int(tok[1]);
      } else {
        throw ParseError("unrecognised preaction line: " + lines[i]);
      }
    }
    Preaction a(p);
    for (auto& l : orbits) {
      a.add_orbit(std::move(l));
    }
    for (std::size_t id = 0; id < edges.size(); ++id) {
      if (!taus[id]) {
        throw ParseError("edge " + std::to_string(id) + " has no tau line");
      }
      auto const& t = *taus[id];
      if (abs(t[0]) > p.abs_n() || abs(t[1]) > p.abs_m()) {
        throw ParseError("residue out of range on edge " + std::to_string(id));
      }
      try {
        a.add_tau_edge(TauEdge{edges[id].src, static_cast<std::int64_t>(t[0]), edges[id].trg,
                               static_cast<std::int64_t>(t[1]), t[2]});
      } catch (InvalidGraph const& err) {
        throw ParseError(err.what());
      }
    }
    if (!orbits.empty()) {
      if (root.value_or(0) >= orbits.size()) {
        throw ParseError("root refers to an unknown orbit");
      }
      a.set_basepoint(Point{root.value_or(0), base});
    }
    return a;
  }

  ////////////////////////////////////////////////////////////////////////
  // LazyAction
  ////////////////////////////////////////////////////////////////////////

  LazyAction::LazyAction(Preaction core) : _a(std::move(core)), _core(_a.orbit_count()) {
    MnGraph g = mn_graph_of(_a);
    if (_core == 0 || !g.is_connected()) {
      throw NotConnected("lazy saturation needs a nonempty transitive preaction");
    }
    _core_distance.reserve(_core);
    for (OrbitId o = 0; o < _core; ++o) {
      _core_distance.push_back(g.distances_from(o));
    }
  }

  OrbitId LazyAction::grow(OrbitId from, std::int64_t residue, Direction direction) {
    Label   label = forest_label(_a.params(), _a.cardinality(from), direction);
    OrbitId fresh = _a.add_orbit(std::move(label));
    if (direction == Direction::outgoing) {
      _a.add_tau_edge(TauEdge{from, residue, fresh, 0, 0});
    } else {
      _a.add_tau_edge(TauEdge{fresh, 0, from, residue, 0});
    }
    ForestInfo info{from, from, 1};
    if (!is_core(from)) {
      auto const& parent = _forest[from - _core];
      info.attachment    = parent.attachment;
      info.depth         = parent.depth + 1;
    }
    _forest.push_back(info);
    return fresh;
  }

  Point LazyAction::shift_t(Point const& x, int s) {
    EdgeId id = _a.edge_at(x, s);
    if (id == no_edge) {
      auto const   slots   = static_cast<std::int64_t>(s > 0 ? _a.out_slots(x.orbit)
                                                             : _a.in_slots(x.orbit));
      std::int64_t residue = floor_mod(x.offset, slots);
      grow(x.orbit, residue, s > 0 ? Direction::outgoing : Direction::incoming);
      id = _a.edge_count() - 1;
    }
    return _a.through_edge(id, x, s);
  }

  Point LazyAction::step(Point const& x, Letter l) {
    if (is_t(l)) {
      return shift_t(x, sign(l));
    }
    return _a.shift_b(x, Int(sign(l)));
  }

  Point LazyAction::apply(Point x, Word const& w) {
    std::size_t i = 0;
    while (i < w.size()) {
      if (is_t(w[i])) {
        x = shift_t(x, sign(w[i]));
        ++i;
        continue;
      }
      std::int64_t run = 0;
      while (i < w.size() && !is_t(w[i])) {
        run += sign(w[i]);
        ++i;
      }
      x = _a.shift_b(x, Int(run));
    }
    return x;
  }

  Point LazyAction::apply(Point x, NormalForm const& g) {
    x = _a.shift_b(x, g.leading());
    for (auto const& blk : g.blocks()) {
      x = shift_t(x, blk.sign);
      x = _a.shift_b(x, blk.exponent);
    }
    return x;
  }

  void LazyAction::expand(OrbitId o) {
    for (std::size_t r = 0; r < _a.out_slots(o); ++r) {
      if (_a.out_edge(o, static_cast<std::int64_t>(r)) == no_edge) {
        grow(o, static_cast<std::int64_t>(r), Direction::outgoing);
      }
    }
    for (std::size_t r = 0; r < _a.in_slots(o); ++r) {
      if (_a.in_edge(o, static_cast<std::int64_t>(r)) == no_edge) {
        grow(o, static_cast<std::int64_t>(r), Direction::incoming);
      }
    }
  }

  void LazyAction::expand_to_depth(std::size_t d) {
    // Orbits are created in nondecreasing depth order, so a single pass in
    // orbit order visits the layers one after the other.
    for (OrbitId o = 0; o < _a.orbit_count() && depth(o) < d; ++o) {
      expand(o);
    }
  }

  std::size_t LazyAction::distance(OrbitId u, OrbitId v) const {
    OrbitId au = is_core(u) ? u : _forest[u - _core].attachment;
    OrbitId av = is_core(v) ? v : _forest[v - _core].attachment;
    if (au != av) {
      return depth(u) + _core_distance[au][av] + depth(v);
    }
    // Same tree hanging from au: climb to the lowest common ancestor.
    std::size_t d = 0;
    while (u != v) {
      if (depth(u) >= depth(v)) {
        u = is_core(u) ? u : _forest[u - _core].parent;
      } else {
        v = is_core(v) ? v : _forest[v - _core].parent;
      }
      ++d;
    }
    return d;
  }

  std::vector<OrbitId> LazyAction::ball_orbits(OrbitId center, std::size_t radius) {
    std::vector<OrbitId>     order{center};
    std::vector<std::size_t> dist(_a.orbit_count(), no_edge);
    dist[center] = 0;
    for (std::size_t head = 0; head < order.size(); ++head) {
      OrbitId u = order[head];
      if (dist[u] == radius) {
        continue;
      }
      expand(u);
      dist.resize(_a.orbit_count(), no_edge);
      auto visit = [&](OrbitId w) {
        if (dist[w] == no_edge) {
          dist[w] = dist[u] + 1;
          order.push_back(w);
        }
      };
      for (std::size_t r = 0; r < _a.out_slots(u); ++r) {
        visit(_a.tau_edge(_a.out_edge(u, static_cast<std::int64_t>(r))).trg);
      }
      for (std::size_t r = 0; r < _a.in_slots(u); ++r) {
        visit(_a.tau_edge(_a.in_edge(u, static_cast<std::int64_t>(r))).src);
      }
    }
    return order;
  }

  MnGraph LazyAction::ball(OrbitId center, std::size_t radius) {
    auto                     order = ball_orbits(center, radius);
    std::vector<std::size_t> index(_a.orbit_count(), no_edge);
    MnGraph                  g(_a.params());
    for (OrbitId o : order) {
      index[o] = g.add_vertex(_a.cardinality(o));
    }
    for (EdgeId id = 0; id < _a.edge_count(); ++id) {
      auto const& e = _a.tau_edge(id);
      if (index[e.src] != no_edge && index[e.trg] != no_edge) {
        g.add_edge(index[e.src], index[e.trg]);
      }
    }
    g.set_root(0);
    return g;
  }

}  // namespace bswalk
