#ifndef BSWALK_GRAPHS_HPP_
#define BSWALK_GRAPHS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "bswalk/label.hpp"
#include "bswalk/words.hpp"

namespace bswalk {

  using VertexId = std::size_t;
  using EdgeId   = std::size_t;

  // A positive edge; its opposite is implicit.
  struct Edge {
    VertexId src;
    VertexId trg;

    bool operator==(Edge const&) const = default;
  };

  // An oriented multigraph with vertices labeled in N* u {inf}.  Only positive
  // edges are stored.
  class MnGraph {
   public:
    explicit MnGraph(Params const& p) : _params(p) {}

    Params const& params() const noexcept {
      return _params;
    }

    VertexId add_vertex(Label label);
    EdgeId   add_edge(VertexId src, VertexId trg);
    void     set_root(VertexId v);
    void     clear_root() noexcept {
      _root.reset();
    }

    std::size_t vertex_count() const noexcept {
      return _labels.size();
    }
    std::size_t edge_count() const noexcept {
      return _edges.size();
    }
    Label const& label(VertexId v) const {
      return _labels.at(v);
    }
    std::vector<Label> const& labels() const noexcept {
      return _labels;
    }
    Edge const& edge(EdgeId e) const {
      return _edges.at(e);
    }
    std::vector<Edge> const& edges() const noexcept {
      return _edges;
    }
    std::optional<VertexId> root() const noexcept {
      return _root;
    }

    std::size_t out_degree(VertexId v) const;
    std::size_t in_degree(VertexId v) const;

    // Undirected adjacency (each edge listed at both ends, loops once).
    std::vector<std::vector<VertexId>> neighbours() const;
    // Undirected breadth-first distances from v; SIZE_MAX when unreachable.
    std::vector<std::size_t> distances_from(VertexId v) const;
    bool                     is_connected() const;

    bool operator==(MnGraph const&) const = default;

   private:
    Params                  _params;
    std::vector<Label>      _labels;
    std::vector<Edge>       _edges;
    std::optional<VertexId> _root;
  };

  enum class Direction { outgoing, incoming };

  struct DegreeViolation {
    VertexId     vertex;
    Direction    direction;
    std::size_t  degree;
    std::int64_t cap;
  };

  struct TransferViolation {
    EdgeId edge;
    // N / (N ^ n) and M / (M ^ m), with infinity as nullopt.
    std::optional<Int> source_ratio;
    std::optional<Int> target_ratio;
  };

  struct ValidationReport {
    std::vector<DegreeViolation>   degree_violations;
    std::vector<TransferViolation> transfer_violations;
    // Preaction-level invariants (residues, anchors, commutation).
    std::vector<std::string> other_violations;
    bool                     saturated = false;
    bool                     connected = false;

    bool valid() const noexcept {
      return degree_violations.empty() && transfer_violations.empty()
             && other_violations.empty();
    }
  };

  ValidationReport validate(MnGraph const& g);

  // N / (N ^ k) as a label (infinity stays infinity).
  std::optional<Int> transfer_ratio(Label const& label, std::int64_t k);

  Label phenotype(Params const& p, Label const& label);

  // Phenotype shared by every label of a connected graph.
  // Throws NotConnected, PhenotypeMismatch.
  Label graph_phenotype(MnGraph const& g);

  // Label of a forest vertex grafted by maximal forest saturation next to a
  // vertex labeled N: N|m|/(N ^ n) across an outgoing edge, N|n|/(N ^ m)
  // across an incoming one.
  Label forest_label(Params const& p, Label const& label, Direction direction);

  // For |m| = |n|: the constant label carried by every forest vertex of a
  // saturation whose core has phenotype `ph`, i.e. ph * prod p^{|n|_p} over
  // primes p not dividing ph.  Infinity for infinite phenotype.
  Label unimodular_forest_label(Params const& p, Label const& ph);

  // Induced subgraph on vertices within undirected distance R of v, rooted at
  // v.  Vertices are renumbered in breadth-first order (root first); edges
  // keep their relative order.
  MnGraph rooted_ball(MnGraph const& g, VertexId v, std::size_t radius);

  // Root-, orientation- and label-preserving isomorphism test.
  // Throws MissingRoot.
  bool rooted_isomorphic(MnGraph const& g1, MnGraph const& g2);

  std::set<Label> enumerate_phenotypes(Params const& p, std::int64_t bound);

  // Line format: "mn-graph m n", "v <id> <label|inf>", "e <src> <trg>",
  // optional "root <id>".  Vertex ids are dense and in order.
  std::string serialize(MnGraph const& g);
  MnGraph     parse_graph(std::string_view text);

}  // namespace bswalk

#endif  // BSWALK_GRAPHS_HPP_
