#ifndef BSWALK_PREACTIONS_HPP_
#define BSWALK_PREACTIONS_HPP_

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bswalk/graphs.hpp"
#include "bswalk/label.hpp"
#include "bswalk/words.hpp"

namespace bswalk {

  using OrbitId = std::size_t;

  inline constexpr std::size_t no_edge = std::numeric_limits<std::size_t>::max();

  struct Point {
    OrbitId orbit = 0;
    Int     offset;  // in [0, N) for a finite orbit of cardinality N

    bool operator==(Point const&) const = default;
  };

  // One positive edge of the quotient graph together with the piece of tau it
  // carries.  With g = N ^ n and g' = M ^ m,
  //
  //   tau(src_residue + k n) = trg_residue + anchor g' + k m,
  //
  // on the src orbit (mod N) and the trg orbit (mod M).  This is the only map
  // on the coset src_residue + nZ commuting as tau b^m = b^n tau.
  struct TauEdge {
    OrbitId      src;
    std::int64_t src_residue;
    OrbitId      trg;
    std::int64_t trg_residue;
    Int          anchor;

    bool operator==(TauEdge const&) const = default;
  };

  // A pair (beta, tau): beta cycles each orbit, tau is the partial bijection
  // given by the edges.  Only the finite data is stored; points of infinite
  // orbits are integers.
  class Preaction {
   public:
    explicit Preaction(Params const& p) : _params(p) {}

    Params const& params() const noexcept {
      return _params;
    }

    OrbitId add_orbit(Label cardinality);
    // Throws InvalidGraph if an endpoint or residue is out of range.  A
    // residue already in use is recorded and reported by validate_preaction.
    EdgeId add_tau_edge(TauEdge e);
    void   set_basepoint(Point x);

    std::size_t orbit_count() const noexcept {
      return _orbits.size();
    }
    std::size_t edge_count() const noexcept {
      return _edges.size();
    }
    Label const& cardinality(OrbitId o) const {
      return _orbits.at(o).cardinality;
    }
    TauEdge const& tau_edge(EdgeId e) const {
      return _edges.at(e).data;
    }
    Point const& basepoint() const noexcept {
      return _basepoint;
    }

    // Edge occupying the outgoing class `residue` (mod N ^ n), resp. the
    // incoming class (mod N ^ m), or no_edge.
    EdgeId out_edge(OrbitId o, std::int64_t residue) const {
      return _orbits[o].out_slot[static_cast<std::size_t>(residue)];
    }
    EdgeId in_edge(OrbitId o, std::int64_t residue) const {
      return _orbits[o].in_slot[static_cast<std::size_t>(residue)];
    }
    std::size_t out_slots(OrbitId o) const {
      return _orbits[o].out_slot.size();
    }
    std::size_t in_slots(OrbitId o) const {
      return _orbits[o].in_slot.size();
    }
    // Residue classes claimed twice (orbit, direction, residue).
    std::vector<std::string> const& slot_conflicts() const noexcept {
      return _conflicts;
    }

    Point make_point(OrbitId o, Int offset) const;

    Point shift_b(Point const& x, Int const& e) const;
    // Image of x under t^sign, or nullopt outside dom(tau) (resp. rng(tau)).
    std::optional<Point> shift_t(Point const& x, int sign) const;
    // The edge that t^sign uses at x, or no_edge.
    EdgeId edge_at(Point const& x, int sign) const;
    Point  through_edge(EdgeId e, Point const& x, int sign) const;

    // Adds the edge through which tau(x) = y, using the residue classes of x
    // and y and solving for the anchor.  Throws InvalidGraph if either class
    // is taken or the coset sizes differ.
    EdgeId connect(Point const& x, Point const& y);

    // Offset reduced for the orbit's cardinality.
    Int canonical(OrbitId o, Int offset) const;

   private:
    struct Orbit {
      Label               cardinality;
      std::vector<EdgeId> out_slot;
      std::vector<EdgeId> in_slot;
    };
    struct StoredEdge {
      TauEdge data;
      // Cached coset arithmetic, see through_edge.
      std::int64_t src_gcd;
      std::int64_t trg_gcd;
      Int          src_period;  // N / g, zero when N is infinite
      Int          trg_period;  // M / g'
      Int          src_inverse; // (n / g)^-1 mod N / g
      Int          trg_inverse; // (m / g')^-1 mod M / g'
    };

    Params                   _params;
    std::vector<Orbit>       _orbits;
    std::vector<StoredEdge>  _edges;
    Point                    _basepoint;
    std::vector<std::string> _conflicts;
  };

  ValidationReport validate_preaction(Preaction const& a);

  // Orbits become vertices labeled by their cardinalities, tau edges become
  // positive edges, the basepoint's orbit is the root.
  MnGraph mn_graph_of(Preaction const& a);

  struct ApplyResult {
    std::optional<Point> point;
    std::size_t          applied = 0;  // letters applied before stopping
  };

  ApplyResult try_apply(Preaction const& a, Point const& x, Word const& w);
  // Throws Undefined(prefix_length).
  Point apply(Preaction const& a, Point const& x, Word const& w);
  // Syllable by syllable, so large b-exponents cost nothing; `applied` counts
  // t-letters.
  ApplyResult try_apply(Preaction const& a, Point const& x, NormalForm const& g);

  struct EdgePath {
    std::vector<std::pair<EdgeId, int>> steps;  // (edge, +1 or -1)

    bool operator==(EdgePath const&) const = default;
  };

  // Throws Undefined.
  EdgePath derive_edge_path(Preaction const& a, Point const& x, Word const& w);

  // Greedy smallest residues and zero anchors.  Throws InvalidGraph unless g
  // is valid, connected and nonempty.
  Preaction realize(MnGraph const& g);

  // Grafts the maximal saturation forest out to distance `depth` from the
  // original orbits.  Throws AlreadySaturated.
  Preaction saturate(Preaction const& a, std::size_t depth);

  bool stabilizer_contains(Preaction const& a, Word const& w);

  // Orbits kept in the given order; edges with both ends kept survive.  The
  // basepoint must be kept.
  Preaction restrict_to(Preaction const& a, std::vector<OrbitId> const& orbits);
  // Same, with a new basepoint given in the numbering of `a`.
  Preaction restrict_to(Preaction const& a, std::vector<OrbitId> const& orbits,
                        Point const& basepoint);

  // "mn-preaction m n", "orbit <id> <card|inf>", "e <src> <trg>",
  // "tau <edge> <src-res> <trg-res> <anchor>", "root <orbit>",
  // "base <offset>".
  std::string serialize(Preaction const& a);
  Preaction   parse_preaction(std::string_view text);

  // Maximal forest saturation of a transitive preaction, grown on demand.
  // Orbits [0, core_size()) are the original ones; every missing residue class
  // met by a walk is filled with a fresh forest orbit labeled by
  // forest_label, attached at residue 0 with anchor 0.
  class LazyAction {
   public:
    // Throws NotConnected unless the quotient graph is connected.
    explicit LazyAction(Preaction core);

    Preaction const& preaction() const noexcept {
      return _a;
    }
    Params const& params() const noexcept {
      return _a.params();
    }
    std::size_t core_size() const noexcept {
      return _core;
    }
    bool is_core(OrbitId o) const noexcept {
      return o < _core;
    }
    std::size_t orbit_count() const noexcept {
      return _a.orbit_count();
    }

    Point shift_b(Point const& x, Int const& e) const {
      return _a.shift_b(x, e);
    }
    Point shift_t(Point const& x, int sign);
    Point step(Point const& x, Letter l);
    Point apply(Point x, Word const& w);
    Point apply(Point x, NormalForm const& g);

    // Fills every missing slot of o.
    void expand(OrbitId o);
    // Grows the forest so that every vertex within distance d of the core
    // exists, layer by layer in orbit order.
    void expand_to_depth(std::size_t d);

    // Distance to the core.
    std::size_t depth(OrbitId o) const {
      return o < _core ? 0 : _forest[o - _core].depth;
    }
    std::size_t distance(OrbitId u, OrbitId v) const;

    // Induced subgraph on the vertices within distance R of `center`, rooted
    // at it; the forest is grown as needed.
    MnGraph ball(OrbitId center, std::size_t radius);
    // Orbits of that ball in breadth-first order.
    std::vector<OrbitId> ball_orbits(OrbitId center, std::size_t radius);

   private:
    struct ForestInfo {
      OrbitId     parent;
      OrbitId     attachment;  // core orbit the tree hangs from
      std::size_t depth;
    };

    OrbitId grow(OrbitId from, std::int64_t residue, Direction direction);

    Preaction                             _a;
    std::size_t                           _core;
    std::vector<ForestInfo>               _forest;
    std::vector<std::vector<std::size_t>> _core_distance;
  };

}  // namespace bswalk

#endif  // BSWALK_PREACTIONS_HPP_
