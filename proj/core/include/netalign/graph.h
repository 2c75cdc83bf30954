#ifndef NETALIGN_GRAPH_H_
#define NETALIGN_GRAPH_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace netalign {

using Edge = std::pair<int, int>;

// Simple undirected graph. Nodes are dense indices 0..n-1, each carrying the
// original string label it was read with. Neighbor lists are sorted and
// symmetric; there are no self-loops or parallel edges. Immutable once built.
class Graph {
 public:
  Graph() = default;

  // Builds a graph over `labels.size()` nodes. Self-loops are dropped and
  // duplicate edges collapsed. Throws std::invalid_argument on out-of-range
  // endpoints or duplicate labels.
  static Graph FromEdges(std::vector<std::string> labels,
                         std::span<const Edge> edges);

  int num_nodes() const { return static_cast<int>(adjacency_.size()); }
  std::size_t num_edges() const { return num_edges_; }

  std::span<const int> neighbors(int v) const { return adjacency_[v]; }
  int degree(int v) const { return static_cast<int>(adjacency_[v].size()); }
  bool HasEdge(int u, int v) const;

  const std::string& label(int v) const { return labels_[v]; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<int> IndexOf(std::string_view label) const;

  // All edges as (u, v) with u < v, sorted lexicographically.
  std::vector<Edge> Edges() const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.labels_ == b.labels_ && a.adjacency_ == b.adjacency_;
  }

 private:
  std::vector<std::vector<int>> adjacency_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, int> index_;
  std::size_t num_edges_ = 0;
};

// Ground-truth node correspondence, stored as (label in N1, label in N2).
struct Correspondence {
  std::vector<std::pair<std::string, std::string>> pairs;

  // Throws DataError if a label repeats on either side.
  void Validate() const;
  bool empty() const { return pairs.empty(); }
  std::size_t size() const { return pairs.size(); }
};

struct GraphStats {
  std::size_t num_nodes1 = 0;
  std::size_t num_edges1 = 0;
  std::optional<std::size_t> num_nodes2;
  std::optional<std::size_t> num_edges2;
  std::optional<std::size_t> overlap_nodes;
  std::optional<std::size_t> overlap_edges;
};

// Reads `src dst [weight]` lines; '#' starts a comment line. Without
// `signed_mode`, edges with negative weight are skipped (positive-only
// variant); with it, every edge is kept as a plain undirected edge. Labels are
// indexed in order of first appearance. Throws ParseError on malformed lines
// and DataError on input with no edges.
Graph ParseEdgeList(std::istream& in, bool signed_mode = false);
Graph ReadEdgeListFile(const std::string& path, bool signed_mode = false);

// Writes one `src dst` line per edge. For graphs whose index order is a
// first-appearance order (anything ParseEdgeList returns) the edges are
// ordered so that reparsing reproduces the same indices.
void WriteEdgeList(const Graph& g, std::ostream& out);
void WriteEdgeListFile(const Graph& g, const std::string& path);

// Two tab-separated label columns per line; '#' comment lines ignored.
Correspondence ParseCorrespondence(std::istream& in);
Correspondence ReadCorrespondenceFile(const std::string& path);
void WriteCorrespondence(const Correspondence& corr, std::ostream& out);
void WriteCorrespondenceFile(const Correspondence& corr,
                             const std::string& path);

struct PermutedGraph {
  Graph graph;
  // permutation[old_index] == new_index. Labels travel with their nodes.
  std::vector<int> permutation;
};

// Relabels indices by an explicit permutation (permutation[old] = new).
PermutedGraph PermuteNodes(const Graph& g, std::span<const int> permutation);
// Uniformly random permutation drawn from `seed`.
PermutedGraph PermuteNodes(const Graph& g, std::uint64_t seed);

// Removes exactly floor(fraction * |E|) distinct edges chosen uniformly at
// random. The node set is unchanged. Throws std::invalid_argument if fraction
// is outside [0, 1].
Graph RemoveEdges(const Graph& g, double fraction, std::uint64_t seed);

// Replaces every label with its index ("0", "1", ...).
Graph WithIndexLabels(const Graph& g);

// Edge-set equality over labels (index order ignored).
bool SameLabeledGraph(const Graph& a, const Graph& b);

GraphStats ComputeGraphStats(const Graph& g1, const Graph* g2 = nullptr,
                             const Correspondence* corr = nullptr);

// Throws std::logic_error naming the violated structural invariant.
void ValidateGraph(const Graph& g);

}  // namespace netalign

#endif  // NETALIGN_GRAPH_H_
