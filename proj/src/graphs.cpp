#include "bswalk/graphs.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <sstream>

#include "bswalk/detail/text.hpp"
#include "bswalk/errors.hpp"

namespace bswalk {

  namespace {
    constexpr std::size_t unreachable = std::numeric_limits<std::size_t>::max();
  }

  ////////////////////////////////////////////////////////////////////////
  // MnGraph
  ////////////////////////////////////////////////////////////////////////

  VertexId MnGraph::add_vertex(Label label) {
    _labels.push_back(std::move(label));
    return _labels.size() - 1;
  }

  EdgeId MnGraph::add_edge(VertexId src, VertexId trg) {
    if (src >= _labels.size() || trg >= _labels.size()) {
      throw InvalidGraph("edge endpoint out of range");
    }
    _edges.push_back(Edge{src, trg});
    return _edges.size() - 1;
  }

  void MnGraph::set_root(VertexId v) {
    if (v >= _labels.size()) {
      throw InvalidGraph("root out of range");
    }
    _root = v;
  }

  std::size_t MnGraph::out_degree(VertexId v) const {
    return static_cast<std::size_t>(std::count_if(
        _edges.begin(), _edges.end(), [v](Edge const& e) { return e.src == v; }));
  }

  std::size_t MnGraph::in_degree(VertexId v) const {
    return static_cast<std::size_t>(std::count_if(
        _edges.begin(), _edges.end(), [v](Edge const& e) { return e.trg == v; }));
  }

  std::vector<std::vector<VertexId>> MnGraph::neighbours() const {
    std::vector<std::vector<VertexId>> adj(_labels.size());
    for (auto const& e : _edges) {
      adj[e.src].push_back(e.trg);
      if (e.src != e.trg) {
        adj[e.trg].push_back(e.src);
      }
    }
    return adj;
  }

  std::vector<std::size_t> MnGraph::distances_from(VertexId v) const {
    std::vector<std::size_t> dist(_labels.size(), unreachable);
    auto                     adj = neighbours();
    std::deque<VertexId>     queue{v};
    dist.at(v) = 0;
    while (!queue.empty()) {
      VertexId u = queue.front();
      queue.pop_front();
      for (VertexId w : adj[u]) {
        if (dist[w] == unreachable) {
          dist[w] = dist[u] + 1;
          queue.push_back(w);
        }
      }
    }
    return dist;
  }

  bool MnGraph::is_connected() const {
    if (_labels.empty()) {
      return true;
    }
    auto dist = distances_from(0);
    return std::none_of(dist.begin(), dist.end(), [](std::size_t d) {
      return d == unreachable;
    });
  }

  ////////////////////////////////////////////////////////////////////////
  // Arithmetic
  ////////////////////////////////////////////////////////////////////////

  std::optional<Int> transfer_ratio(Label const& label, std::int64_t k) {
    if (label.is_infinite()) {
      return std::nullopt;
    }
    return label.value() / wedge(label, k);
  }

  ValidationReport validate(MnGraph const& g) {
    auto const&      p = g.params();
    ValidationReport report;
    std::size_t const nv = g.vertex_count();
    std::vector<std::size_t> out(nv, 0), in(nv, 0);
    for (auto const& e : g.edges()) {
      ++out[e.src];
      ++in[e.trg];
    }
    bool saturated = true;
    for (VertexId v = 0; v < nv; ++v) {
      auto out_cap = wedge(g.label(v), p.n());
      auto in_cap  = wedge(g.label(v), p.m());
      if (out[v] > static_cast<std::size_t>(out_cap)) {
        report.degree_violations.push_back({v, Direction::outgoing, out[v], out_cap});
      }
      if (in[v] > static_cast<std::size_t>(in_cap)) {
        report.degree_violations.push_back({v, Direction::incoming, in[v], in_cap});
      }
      saturated = saturated && out[v] == static_cast<std::size_t>(out_cap)
                  && in[v] == static_cast<std::size_t>(in_cap);
    }
    for (EdgeId id = 0; id < g.edge_count(); ++id) {
      auto const& e   = g.edge(id);
      auto        lhs = transfer_ratio(g.label(e.src), p.n());
      auto        rhs = transfer_ratio(g.label(e.trg), p.m());
      if (lhs != rhs) {
        report.transfer_violations.push_back({id, lhs, rhs});
      }
    }
    report.saturated = saturated;
    report.connected = g.is_connected();
    return report;
  }

  Label phenotype(Params const& p, Label const& label) {
    if (label.is_infinite()) {
      return Label::infinity();
    }
    Int const& N  = label.value();
    Int        mn = Int(p.abs_m()) * p.abs_n();
    // Primes coprime to mn have |m|_p = |n|_p = 0 and contribute whenever
    // they divide N; the remaining primes divide mn and are checked directly.
    Int result = strip_common_primes(N, mn);
    for (auto q : prime_factors(p.abs_m() * p.abs_n())) {
      int vm = valuation(p.m(), q);
      int vn = valuation(p.n(), q);
      int vN = valuation(N, q);
      if (vm == vn && vN > vn) {
        result *= boost::multiprecision::pow(Int(q), static_cast<unsigned>(vN));
      }
    }
    return Label(result);
  }

  Label graph_phenotype(MnGraph const& g) {
    if (g.vertex_count() == 0 || !g.is_connected()) {
      throw NotConnected("phenotype is defined for connected, nonempty graphs");
    }
    Label ph = phenotype(g.params(), g.label(0));
    for (VertexId v = 1; v < g.vertex_count(); ++v) {
      if (phenotype(g.params(), g.label(v)) != ph) {
        throw PhenotypeMismatch("vertex " + std::to_string(v) + " has phenotype "
                                + to_string(phenotype(g.params(), g.label(v)))
                                + ", vertex 0 has " + to_string(ph));
      }
    }
    return ph;
  }

  Label forest_label(Params const& p, Label const& label, Direction direction) {
    if (label.is_infinite()) {
      return Label::infinity();
    }
    if (direction == Direction::outgoing) {
      return Label(label.value() * p.abs_m() / wedge(label, p.n()));
    }
    return Label(label.value() * p.abs_n() / wedge(label, p.m()));
  }

  Label unimodular_forest_label(Params const& p, Label const& ph) {
    if (p.abs_m() != p.abs_n()) {
      throw BadParams("the constant forest label needs |m| = |n|");
    }
    if (ph.is_infinite()) {
      return ph;
    }
    Int result = ph.value();
    for (auto q : prime_factors(p.abs_n())) {
      if (valuation(ph.value(), q) == 0) {
        result *= boost::multiprecision::pow(
            Int(q), static_cast<unsigned>(valuation(p.n(), q)));
      }
    }
    return Label(result);
  }

  std::set<Label> enumerate_phenotypes(Params const& p, std::int64_t bound) {
    if (bound < 1) {
      throw BadParams("phenotype enumeration bound must be >= 1");
    }
    std::set<Label> out{Label::infinity()};
    for (std::int64_t N = 1; N <= bound; ++N) {
      out.insert(phenotype(p, Label(N)));
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Balls
  ////////////////////////////////////////////////////////////////////////

  MnGraph rooted_ball(MnGraph const& g, VertexId v, std::size_t radius) {
    if (v >= g.vertex_count()) {
      throw InvalidGraph("ball center out of range");
    }
    auto                  adj = g.neighbours();
    std::vector<std::size_t> index(g.vertex_count(), unreachable);
    std::vector<std::size_t> dist(g.vertex_count(), unreachable);
    std::vector<VertexId> order{v};
    dist[v]  = 0;
    index[v] = 0;
    for (std::size_t head = 0; head < order.size(); ++head) {
      VertexId u = order[head];
      if (dist[u] == radius) {
        continue;
      }
      for (VertexId w : adj[u]) {
        if (dist[w] == unreachable) {
          dist[w]  = dist[u] + 1;
          index[w] = order.size();
          order.push_back(w);
        }
      }
    }
    MnGraph ball(g.params());
    for (VertexId u : order) {
      ball.add_vertex(g.label(u));
    }
    for (auto const& e : g.edges()) {
      if (index[e.src] != unreachable && index[e.trg] != unreachable) {
        ball.add_edge(index[e.src], index[e.trg]);
      }
    }
    ball.set_root(0);
    return ball;
  }

  ////////////////////////////////////////////////////////////////////////
  // Rooted isomorphism
  ////////////////////////////////////////////////////////////////////////

  namespace {

    struct Adjacency {
      // mult[u][v] = number of positive edges u -> v.
      std::vector<std::map<VertexId, std::size_t>> out;
      std::vector<std::map<VertexId, std::size_t>> in;

      explicit Adjacency(MnGraph const& g)
          : out(g.vertex_count()), in(g.vertex_count()) {
        for (auto const& e : g.edges()) {
          ++out[e.src][e.trg];
          ++in[e.trg][e.src];
        }
      }

      std::size_t count(VertexId u, VertexId v) const {
        auto it = out[u].find(v);
        return it == out[u].end() ? 0 : it->second;
      }
    };

    using Signature = std::vector<std::int64_t>;

    // Joint colour refinement of both graphs, so that colours are comparable
    // across them.  The initial colour includes the label, the distance from
    // the root and the degrees.
    std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
    refine_colours(MnGraph const& g1, Adjacency const& a1, MnGraph const& g2,
                   Adjacency const& a2) {
      std::map<std::string, std::int64_t> label_ids;
      auto label_id = [&label_ids](Label const& l) {
        auto [it, inserted] = label_ids.emplace(to_string(l),
                                                static_cast<std::int64_t>(label_ids.size()));
        return it->second;
      };
      auto initial = [&](MnGraph const& g, Adjacency const& a) {
        auto                   dist = g.distances_from(*g.root());
        std::vector<Signature> sig(g.vertex_count());
        for (VertexId v = 0; v < g.vertex_count(); ++v) {
          sig[v] = {label_id(g.label(v)),
                    dist[v] == unreachable ? -1 : static_cast<std::int64_t>(dist[v]),
                    static_cast<std::int64_t>(g.out_degree(v)),
                    static_cast<std::int64_t>(g.in_degree(v)),
                    static_cast<std::int64_t>(a.count(v, v))};
        }
        return sig;
      };
      auto s1 = initial(g1, a1);
      auto s2 = initial(g2, a2);

      auto compress = [](std::vector<Signature> const& x, std::vector<Signature> const& y) {
        std::map<Signature, std::size_t> ids;
        for (auto const& s : x) {
          ids.emplace(s, 0);
        }
        for (auto const& s : y) {
          ids.emplace(s, 0);
        }
        std::size_t next = 0;
        for (auto& [s, id] : ids) {
          id = next++;
        }
        std::vector<std::size_t> cx, cy;
        for (auto const& s : x) {
          cx.push_back(ids[s]);
        }
        for (auto const& s : y) {
          cy.push_back(ids[s]);
        }
        return std::make_tuple(cx, cy, ids.size());
      };

      auto [c1, c2, classes] = compress(s1, s2);
      while (true) {
        auto next_sig = [](std::vector<std::size_t> const& c, Adjacency const& a) {
          std::vector<Signature> sig(c.size());
          for (VertexId v = 0; v < c.size(); ++v) {
            Signature s{static_cast<std::int64_t>(c[v])};
            std::vector<std::int64_t> outs, ins;
            for (auto const& [w, k] : a.out[v]) {
              outs.push_back(static_cast<std::int64_t>(c[w] * 1024 + k));
            }
            for (auto const& [w, k] : a.in[v]) {
              ins.push_back(static_cast<std::int64_t>(c[w] * 1024 + k));
            }
            std::sort(outs.begin(), outs.end());
            std::sort(ins.begin(), ins.end());
            s.push_back(-1);
            s.insert(s.end(), outs.begin(), outs.end());
            s.push_back(-2);
            s.insert(s.end(), ins.begin(), ins.end());
            sig[v] = std::move(s);
          }
          return sig;
        };
        auto [n1, n2, next_classes] = compress(next_sig(c1, a1), next_sig(c2, a2));
        c1 = std::move(n1);
        c2 = std::move(n2);
        if (next_classes == classes) {
          break;
        }
        classes = next_classes;
      }
      return {c1, c2};
    }

    class IsoSearch {
     public:
      IsoSearch(MnGraph const& g1, MnGraph const& g2)
          : _g1(g1), _g2(g2), _a1(g1), _a2(g2) {}

      bool run() {
        auto [c1, c2] = refine_colours(_g1, _a1, _g2, _a2);
        _c1           = std::move(c1);
        _c2           = std::move(c2);
        auto h1 = _c1, h2 = _c2;
        std::sort(h1.begin(), h1.end());
        std::sort(h2.begin(), h2.end());
        if (h1 != h2) {
          return false;
        }
        VertexId r1 = *_g1.root(), r2 = *_g2.root();
        if (_c1[r1] != _c2[r2]) {
          return false;
        }
        // Visit g1 in breadth-first order from the root; unreachable
        // vertices come last.
        auto dist = _g1.distances_from(r1);
        _order.resize(_g1.vertex_count());
        for (VertexId v = 0; v < _g1.vertex_count(); ++v) {
          _order[v] = v;
        }
        std::stable_sort(_order.begin(), _order.end(), [&dist](VertexId a, VertexId b) {
          return dist[a] < dist[b];
        });
        _forward.assign(_g1.vertex_count(), unreachable);
        _backward.assign(_g2.vertex_count(), unreachable);
        return extend(0, r2);
      }

     private:
      bool consistent(VertexId v, VertexId w) const {
        // Edge multiplicities between v and every already-mapped vertex must
        // agree in both directions; mapped neighbours of w must come from
        // neighbours of v.
        for (auto const& [u, k] : _a1.out[v]) {
          if (u == v) {
            if (_a2.count(w, w) != k) {
              return false;
            }
          } else if (_forward[u] != unreachable && _a2.count(w, _forward[u]) != k) {
            return false;
          }
        }
        for (auto const& [u, k] : _a1.in[v]) {
          if (u != v && _forward[u] != unreachable && _a2.count(_forward[u], w) != k) {
            return false;
          }
        }
        for (auto const& [u, k] : _a2.out[w]) {
          if (u != w && _backward[u] != unreachable && _a1.count(v, _backward[u]) != k) {
            return false;
          }
        }
        for (auto const& [u, k] : _a2.in[w]) {
          if (u != w && _backward[u] != unreachable && _a1.count(_backward[u], v) != k) {
            return false;
          }
        }
        return true;
      }

      bool extend(std::size_t pos, VertexId hint) {
        if (pos == _order.size()) {
          return true;
        }
        VertexId v = _order[pos];
        std::vector<VertexId> candidates;
        if (pos == 0) {
          candidates.push_back(hint);
        } else {
          // Prefer images of an already-mapped neighbour's neighbours.
          VertexId anchor = unreachable;
          for (auto const& [u, k] : _a1.in[v]) {
            if (_forward[u] != unreachable) {
              anchor = u;
              break;
            }
          }
          if (anchor == unreachable) {
            for (auto const& [u, k] : _a1.out[v]) {
              if (_forward[u] != unreachable) {
                anchor = u;
                break;
              }
            }
          }
          if (anchor != unreachable) {
            VertexId image = _forward[anchor];
            for (auto const& [u, k] : _a2.out[image]) {
              candidates.push_back(u);
            }
            for (auto const& [u, k] : _a2.in[image]) {
              candidates.push_back(u);
            }
            std::sort(candidates.begin(), candidates.end());
            candidates.erase(std::unique(candidates.begin(), candidates.end()),
                             candidates.end());
          } else {
            for (VertexId w = 0; w < _g2.vertex_count(); ++w) {
              candidates.push_back(w);
            }
          }
        }
        for (VertexId w : candidates) {
          if (_backward[w] != unreachable || _c2[w] != _c1[v]
              || _g2.label(w) != _g1.label(v) || !consistent(v, w)) {
            continue;
          }
          _forward[v]  = w;
          _backward[w] = v;
          if (extend(pos + 1, hint)) {
            return true;
          }
          _forward[v]  = unreachable;
          _backward[w] = unreachable;
        }
        return false;
      }

      MnGraph const&           _g1;
      MnGraph const&           _g2;
      Adjacency                _a1;
      Adjacency                _a2;
      std::vector<std::size_t> _c1, _c2;
      std::vector<VertexId>    _order;
      std::vector<VertexId>    _forward, _backward;
    };

  }  // namespace

  bool rooted_isomorphic(MnGraph const& g1, MnGraph const& g2) {
    if (!g1.root() || !g2.root()) {
      throw MissingRoot("rooted isomorphism needs both graphs rooted");
    }
    if (g1.vertex_count() != g2.vertex_count() || g1.edge_count() != g2.edge_count()
        || !(g1.params() == g2.params())) {
      return false;
    }
    return IsoSearch(g1, g2).run();
  }

  ////////////////////////////////////////////////////////////////////////
  // Serialization
  ////////////////////////////////////////////////////////////////////////

  std::string serialize(MnGraph const& g) {
    std::ostringstream out;
    out << "mn-graph " << g.params().m() << ' ' << g.params().n() << '\n';
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      out << "v " << v << ' ' << to_string(g.label(v)) << '\n';
    }
    for (auto const& e : g.edges()) {
      out << "e " << e.src << ' ' << e.trg << '\n';
    }
    if (g.root()) {
      out << "root " << *g.root() << '\n';
    }
    return out.str();
  }

  MnGraph parse_graph(std::string_view text) {
    auto lines = detail::content_lines(text);
    if (lines.empty()) {
      throw ParseError("empty graph description");
    }
    auto header = detail::tokens(lines[0]);
    if (header.size() != 3 || header[0] != "mn-graph") {
      throw ParseError("expected header 'mn-graph <m> <n>'");
    }
    MnGraph g(Params(static_cast<std::int64_t>(parse_int(header[1])),
                     static_cast<std::int64_t>(parse_int(header[2]))));
    for (std::size_t i = 1; i < lines.size(); ++i) {
      auto tok = detail::tokens(lines[i]);
      if (tok[0] == "v" && tok.size() == 3) {
        if (detail::parse_index(tok[1]) != g.vertex_count()) {
          throw ParseError("vertex ids must be dense and in order: " + lines[i]);
        }
        g.add_vertex(parse_label(tok[2]));
      } else if (tok[0] == "e" && tok.size() == 3) {
        auto src = detail::parse_index(tok[1]);
        auto trg = detail::parse_index(tok[2]);
        if (src >= g.vertex_count() || trg >= g.vertex_count()) {
          throw ParseError("edge refers to unknown vertex: " + lines[i]);
        }
        g.add_edge(src, trg);
      } else if (tok[0] == "root" && tok.size() == 2) {
        auto r = detail::parse_index(tok[1]);
        if (r >= g.vertex_count()) {
          throw ParseError("root refers to unknown vertex: " + lines[i]);
        }
        g.set_root(r);
      } else {
        throw ParseError("unrecognised graph line: " + lines[i]);
      }
    }
    return g;
  }

}  // namespace bswalk
