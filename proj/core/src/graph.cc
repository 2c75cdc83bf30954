#include "netalign/graph.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "netalign/errors.h"
#include "netalign/random.h"

namespace netalign {
namespace {

std::vector<std::string_view> SplitWhitespace(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])))
      ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

bool IsCommentOrBlank(std::string_view line) {
  auto pos = line.find_first_not_of(" \t\r\n");
  return pos == std::string_view::npos || line[pos] == '#';
}

std::optional<double> ParseDouble(std::string_view token) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return value;
}

std::ifstream OpenInput(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream OpenOutput(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

Graph Graph::FromEdges(std::vector<std::string> labels,
                       std::span<const Edge> edges) {
  Graph g;
  const int n = static_cast<int>(labels.size());
  g.adjacency_.assign(n, {});
  g.index_.reserve(labels.size());
  for (int i = 0; i < n; ++i) {
    if (!g.index_.emplace(labels[i], i).second)
      throw std::invalid_argument("duplicate node label '" + labels[i] + "'");
  }
  g.labels_ = std::move(labels);
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n)
      throw std::invalid_argument("edge endpoint out of range");
    if (u == v) continue;
    g.adjacency_[u].push_back(v);
    g.adjacency_[v].push_back(u);
  }
  std::size_t degree_sum = 0;
  for (auto& nbrs : g.adjacency_) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    nbrs.shrink_to_fit();
    degree_sum += nbrs.size();
  }
  g.num_edges_ = degree_sum / 2;
  return g;
}

bool Graph::HasEdge(int u, int v) const {
  const auto& a = adjacency_[u].size() <= adjacency_[v].size() ? adjacency_[u]
                                                                : adjacency_[v];
  const int other = &a == &adjacency_[u] ? v : u;
  return std::binary_search(a.begin(), a.end(), other);
}

std::optional<int> Graph::IndexOf(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<Edge> Graph::Edges() const {
  std::vector<Edge> edges;
  edges.reserve(num_edges_);
  for (int u = 0; u < num_nodes(); ++u)
    for (int v : adjacency_[u])
      if (u < v) edges.emplace_back(u, v);
  return edges;
}

void Correspondence::Validate() const {
  std::unordered_set<std::string> left, right;
  for (const auto& [a, b] : pairs) {
    if (!left.insert(a).second)
      throw DataError("correspondence repeats N1 label '" + a + "'");
    if (!right.insert(b).second)
      throw DataError("correspondence repeats N2 label '" + b + "'");
  }
}

Graph ParseEdgeList(std::istream& in, bool signed_mode) {
  std::vector<std::string> labels;
  std::unordered_map<std::string, int> index;
  std::vector<Edge> edges;
  auto intern = [&](std::string_view token) {
    auto [it, inserted] =
        index.emplace(std::string(token), static_cast<int>(labels.size()));
    if (inserted) labels.emplace_back(token);
    return it->second;
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsCommentOrBlank(line)) continue;
    auto tokens = SplitWhitespace(line);
    if (tokens.size() < 2)
      throw ParseError(line_no, "expected 'src dst [weight]'");
    if (tokens.size() >= 3) {
      auto weight = ParseDouble(tokens[2]);
      if (!weight || !std::isfinite(*weight))
        throw ParseError(line_no, "weight '" + std::string(tokens[2]) +
                                      "' is not a number");
      if (*weight < 0.0 && !signed_mode) continue;
    }
    int u = intern(tokens[0]);
    int v = intern(tokens[1]);
    edges.emplace_back(u, v);
  }
  if (in.bad()) throw DataError("read error while parsing edge list");
  if (edges.empty()) throw DataError("edge list contains no edges");
  return Graph::FromEdges(std::move(labels), edges);
}

Graph ReadEdgeListFile(const std::string& path, bool signed_mode) {
  auto in = OpenInput(path);
  return ParseEdgeList(in, signed_mode);
}

void WriteEdgeList(const Graph& g, std::ostream& out) {
  const int n = g.num_nodes();
  std::vector<Edge> order;
  order.reserve(g.num_edges());
  // Emit one "introducing" edge per node in index order so the first
  // appearance of each label matches its index; fall back to plain order when
  // the graph's index order cannot be reproduced (isolated or permuted nodes).
  bool reproducible = true;
  int seen = 0;
  while (seen < n) {
    auto nbrs = g.neighbors(seen);
    if (!nbrs.empty() && nbrs.front() < seen) {
      order.emplace_back(nbrs.front(), seen);
      seen += 1;
    } else if (seen + 1 < n && g.HasEdge(seen, seen + 1)) {
      order.emplace_back(seen, seen + 1);
      seen += 2;
    } else {
      reproducible = false;
      break;
    }
  }
  if (!reproducible) order.clear();
  std::vector<Edge> all = g.Edges();
  if (!order.empty()) {
    std::vector<Edge> normalized;
    normalized.reserve(order.size());
    for (auto [a, b] : order) normalized.emplace_back(std::min(a, b), std::max(a, b));
    std::sort(normalized.begin(), normalized.end());
    std::vector<Edge> rest;
    rest.reserve(all.size() - normalized.size());
    std::set_difference(all.begin(), all.end(), normalized.begin(),
                        normalized.end(), std::back_inserter(rest));
    order.insert(order.end(), rest.begin(), rest.end());
  } else {
    order = std::move(all);
  }
  for (auto [u, v] : order) out << g.label(u) << ' ' << g.label(v) << '\n';
}

void WriteEdgeListFile(const Graph& g, const std::string& path) {
  auto out = OpenOutput(path);
  WriteEdgeList(g, out);
  if (!out) throw DataError("write error on '" + path + "'");
}

Correspondence ParseCorrespondence(std::istream& in) {
  Correspondence corr;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsCommentOrBlank(line)) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string_view> cols;
    auto tab = line.find('\t');
    if (tab != std::string::npos) {
      std::string_view sv(line);
      cols = {sv.substr(0, tab), sv.substr(tab + 1)};
      auto second_tab = cols[1].find('\t');
      if (second_tab != std::string_view::npos)
        cols[1] = cols[1].substr(0, second_tab);
    } else {
      cols = SplitWhitespace(line);
    }
    if (cols.size() < 2 || cols[0].empty() || cols[1].empty())
      throw ParseError(line_no, "expected two label columns");
    corr.pairs.emplace_back(std::string(cols[0]), std::string(cols[1]));
  }
  corr.Validate();
  return corr;
}

Correspondence ReadCorrespondenceFile(const std::string& path) {
  auto in = OpenInput(path);
  return ParseCorrespondence(in);
}

void WriteCorrespondence(const Correspondence& corr, std::ostream& out) {
  for (const auto& [a, b] : corr.pairs) out << a << '\t' << b << '\n';
}

void WriteCorrespondenceFile(const Correspondence& corr,
                             const std::string& path) {
  auto out = OpenOutput(path);
  WriteCorrespondence(corr, out);
  if (!out) throw DataError("write error on '" + path + "'");
}

PermutedGraph PermuteNodes(const Graph& g, std::span<const int> permutation) {
  const int n = g.num_nodes();
  if (static_cast<int>(permutation.size()) != n)
    throw std::invalid_argument("permutation size does not match graph");
  std::vector<char> hit(n, 0);
  for (int p : permutation) {
    if (p < 0 || p >= n || hit[p])
      throw std::invalid_argument("not a permutation of node indices");
    hit[p] = 1;
  }
  std::vector<std::string> labels(n);
  for (int v = 0; v < n; ++v) labels[permutation[v]] = g.label(v);
  std::vector<Edge> edges;
  edges.reserve(g.num_edges());
  for (auto [u, v] : g.Edges()) edges.emplace_back(permutation[u], permutation[v]);
  return {Graph::FromEdges(std::move(labels), edges),
          std::vector<int>(permutation.begin(), permutation.end())};
}

PermutedGraph PermuteNodes(const Graph& g, std::uint64_t seed) {
  std::vector<int> perm(g.num_nodes());
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng = MakeRng(seed, {0x7065726dULL});
  std::shuffle(perm.begin(), perm.end(), rng);
  return PermuteNodes(g, perm);
}

Graph RemoveEdges(const Graph& g, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0))
    throw std::invalid_argument("edge removal fraction must lie in [0, 1]");
  std::vector<Edge> edges = g.Edges();
  const auto total = edges.size();
  // The epsilon absorbs representation error such as 0.29 * 100 = 28.999...
  auto remove = static_cast<std::size_t>(
      std::floor(fraction * static_cast<double>(total) + 1e-9));
  remove = std::min(remove, total);
  Rng rng = MakeRng(seed, {0x6e6f697365ULL});
  // Partial Fisher-Yates: the first `remove` slots become the removed set.
  for (std::size_t i = 0; i < remove; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, total - 1);
    std::swap(edges[i], edges[pick(rng)]);
  }
  std::vector<Edge> kept(edges.begin() + static_cast<std::ptrdiff_t>(remove),
                         edges.end());
  return Graph::FromEdges(g.labels(), kept);
}

Graph WithIndexLabels(const Graph& g) {
  std::vector<std::string> labels(g.num_nodes());
  for (int v = 0; v < g.num_nodes(); ++v) labels[v] = std::to_string(v);
  auto edges = g.Edges();
  return Graph::FromEdges(std::move(labels), edges);
}

bool SameLabeledGraph(const Graph& a, const Graph& b) {
  if (a.num_nodes() != b.num_nodes() || a.num_edges() != b.num_edges())
    return false;
  for (int v = 0; v < a.num_nodes(); ++v) {
    auto w = b.IndexOf(a.label(v));
    if (!w || a.degree(v) != b.degree(*w)) return false;
    for (int u : a.neighbors(v)) {
      auto x = b.IndexOf(a.label(u));
      if (!x || !b.HasEdge(*w, *x)) return false;
    }
  }
  return true;
}

GraphStats ComputeGraphStats(const Graph& g1, const Graph* g2,
                             const Correspondence* corr) {
  GraphStats stats;
  stats.num_nodes1 = static_cast<std::size_t>(g1.num_nodes());
  stats.num_edges1 = g1.num_edges();
  if (g2 != nullptr) {
    stats.num_nodes2 = static_cast<std::size_t>(g2->num_nodes());
    stats.num_edges2 = g2->num_edges();
  }
  if (corr == nullptr) return stats;
  if (g2 == nullptr)
    throw std::invalid_argument("a correspondence needs two graphs");
  corr->Validate();

  std::vector<int> mapped(g1.num_nodes(), -1);
  for (const auto& [a, b] : corr->pairs) {
    auto u = g1.IndexOf(a);
    if (!u) throw DataError("correspondence label '" + a + "' not in N1");
    auto v = g2->IndexOf(b);
    if (!v) throw DataError("correspondence label '" + b + "' not in N2");
    mapped[*u] = *v;
  }
  std::size_t overlap_edges = 0;
  for (auto [u, v] : g1.Edges())
    if (mapped[u] >= 0 && mapped[v] >= 0 && g2->HasEdge(mapped[u], mapped[v]))
      ++overlap_edges;
  stats.overlap_nodes = corr->size();
  stats.overlap_edges = overlap_edges;
  return stats;
}

void ValidateGraph(const Graph& g) {
  std::size_t degree_sum = 0;
  for (int v = 0; v < g.num_nodes(); ++v) {
    auto nbrs = g.neighbors(v);
    degree_sum += nbrs.size();
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      int u = nbrs[i];
      if (u < 0 || u >= g.num_nodes())
        throw std::logic_error("neighbor index out of range");
      if (u == v) throw std::logic_error("self-loop at " + g.label(v));
      if (i > 0 && nbrs[i - 1] >= u)
        throw std::logic_error("neighbor list unsorted or duplicated");
      auto back = g.neighbors(u);
      if (!std::binary_search(back.begin(), back.end(), v))
        throw std::logic_error("asymmetric adjacency");
    }
    if (g.IndexOf(g.label(v)) != v)
      throw std::logic_error("label index inconsistent");
  }
  if (degree_sum != 2 * g.num_edges())
    throw std::logic_error("degree sum differs from 2|E|");
}

}  // namespace netalign
