#include "sld/randgraph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "sld/errors.hpp"

namespace sld {

Graph sample_er(std::size_t n, double d, Stream& rng) {
  if (n < 2) throw DomainError("sample_er: requires n >= 2");
  if (!(d > 0.0)) throw DomainError("sample_er: requires d > 0");
  if (d > static_cast<double>(n)) throw DomainError("sample_er: requires d <= n");
  const double p = d / static_cast<double>(n);
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(d * static_cast<double>(n) * 0.55) + 16);

  // Pairs (w, v) with w < v are visited in the order v = 1..n-1, w = 0..v-1;
  // the gap to the next present pair is geometric with parameter p.
  const double log_q = std::log1p(-p);
  const auto nn = static_cast<std::int64_t>(n);
  std::int64_t v = 1;
  std::int64_t w = -1;
  constexpr double kSkipCap = 4.0e18;
  while (v < nn) {
    double skip = 0.0;
    if (p < 1.0) {
      skip = std::floor(std::log(rng.uniform_pos()) / log_q);
      if (!(skip < kSkipCap)) break;
    }
    w += 1 + static_cast<std::int64_t>(skip);
    while (w >= v && v < nn) {
      w -= v;
      ++v;
    }
    if (v < nn) edges.push_back({static_cast<Vertex>(w), static_cast<Vertex>(v)});
  }
  std::sort(edges.begin(), edges.end());
  return Graph::from_sorted_unchecked(n, std::move(edges));
}

WeightedGraph attach_weights(const Graph& g, const WeibullSpec& spec, Stream& rng) {
  std::vector<double> w;
  w.reserve(g.m());
  for (std::size_t i = 0; i < g.m(); ++i) w.push_back(sample(spec, rng));
  if (g.m() == 0) {
    // Still enforce the sampler contract on empty input.
    spec.validate();
    if (!spec.is_canonical()) {
      throw UnsupportedSampler("attach_weights: non-canonical weight law");
    }
  }
  return WeightedGraph(g, std::move(w));
}

ThresholdSplit split_by_threshold(const WeightedGraph& z, double threshold) {
  std::vector<Edge> he, le;
  std::vector<double> hw, lw;
  const auto edges = z.edges();
  const auto w = z.weights();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (std::abs(w[i]) > threshold) {
      he.push_back(edges[i]);
      hw.push_back(w[i]);
    } else {
      le.push_back(edges[i]);
      lw.push_back(w[i]);
    }
  }
  return {WeightedGraph(Graph::from_sorted_unchecked(z.n(), std::move(he)), std::move(hw)),
          WeightedGraph(Graph::from_sorted_unchecked(z.n(), std::move(le)), std::move(lw))};
}

double degree_scale(double n) {
  if (!(n >= 16.0)) throw DomainError("degree scale: requires n >= 16");
  const double ln = std::log(n);
  return ln / std::log(ln);
}

std::size_t g_of_gamma(double gamma, double n) {
  const double t = degree_scale(n);
  if (!(gamma >= 0.0)) throw DomainError("g_of_gamma: requires gamma >= 0");
  return static_cast<std::size_t>(std::ceil(gamma * t));
}

std::vector<double> default_gamma_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 15; ++i) grid.push_back(i / 10.0);
  return grid;
}

std::size_t StructureReport::tree_components() const {
  return static_cast<std::size_t>(std::count_if(
      components.begin(), components.end(),
      [](const ComponentStats& c) { return c.tree_excess == -1; }));
}

std::size_t StructureReport::largest_component() const {
  std::size_t best = 0;
  for (const auto& c : components) best = std::max(best, c.size);
  return best;
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), Vertex{0});
  }

  Vertex find(Vertex x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(Vertex a, Vertex b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

 private:
  std::vector<Vertex> parent_;
  std::vector<std::size_t> size_;
};

}  // namespace

std::vector<Vertex> component_labels(const Graph& g) {
  DisjointSets sets(g.n());
  for (const auto& e : g.edges()) sets.unite(e.u, e.v);
  std::vector<Vertex> rep_to_label(g.n(), static_cast<Vertex>(-1));
  std::vector<Vertex> label(g.n());
  for (Vertex v = 0; v < g.n(); ++v) {
    const Vertex r = sets.find(v);
    if (rep_to_label[r] == static_cast<Vertex>(-1)) rep_to_label[r] = v;
    label[v] = rep_to_label[r];
  }
  return label;
}

StructureReport structure_report(const Graph& g, std::span<const double> gammas,
                                 std::size_t clique_budget) {
  StructureReport rep;
  rep.n = g.n();
  const auto deg = g.degrees();
  for (auto d : deg) {
    ++rep.degree_counts[d];
    rep.max_degree = std::max(rep.max_degree, d);
  }
  for (double gamma : gammas) {
    const std::size_t thr = g_of_gamma(gamma, static_cast<double>(g.n()));
    const auto count = static_cast<std::size_t>(
        std::count_if(deg.begin(), deg.end(), [&](std::size_t d) { return d >= thr; }));
    rep.d_gamma_counts.emplace_back(gamma, count);
  }

  const auto label = component_labels(g);
  std::vector<std::size_t> slot(g.n(), 0);
  std::vector<std::vector<Vertex>> members;
  for (Vertex v = 0; v < g.n(); ++v) {
    if (label[v] == v) {
      slot[v] = members.size();
      members.emplace_back();
    }
    members[slot[label[v]]].push_back(v);
  }
  std::vector<std::size_t> edge_count(members.size(), 0);
  for (const auto& e : g.edges()) ++edge_count[slot[label[e.u]]];

  const Adjacency adj(g);
  rep.components.reserve(members.size());
  for (std::size_t c = 0; c < members.size(); ++c) {
    ComponentStats s{};
    s.root = members[c].front();
    s.size = members[c].size();
    s.edge_count = edge_count[c];
    s.tree_excess = static_cast<long>(s.edge_count) - static_cast<long>(s.size);
    if (s.size == 1) {
      s.max_clique = 1;
      s.clique_exact = true;
    } else if (s.size == 2 || s.tree_excess == -1) {
      // Trees with an edge have clique number exactly 2.
      s.max_clique = 2;
      s.clique_exact = true;
    } else {
      const auto res = max_clique(adj, members[c], clique_budget);
      s.max_clique = res.size;
      s.clique_exact = res.exact;
    }
    rep.max_clique = std::max(rep.max_clique, s.max_clique);
    rep.clique_exact = rep.clique_exact && s.clique_exact;
    rep.components.push_back(s);
  }
  return rep;
}

StarDecomposition star_decomposition(const Graph& g, std::size_t degree_threshold) {
  if (degree_threshold < 1) {
    throw DomainError("star_decomposition: requires degree_threshold >= 1");
  }
  const std::size_t n = g.n();
  const auto edges = g.edges();
  // Incidence lists of (neighbour, edge id).
  std::vector<std::size_t> off(n + 1, 0);
  for (const auto& e : edges) {
    ++off[e.u + 1];
    ++off[e.v + 1];
  }
  std::partial_sum(off.begin(), off.end(), off.begin());
  std::vector<std::pair<Vertex, std::size_t>> inc(2 * edges.size());
  {
    std::vector<std::size_t> fill(off.begin(), off.end() - 1);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      inc[fill[edges[i].u]++] = {edges[i].v, i};
      inc[fill[edges[i].v]++] = {edges[i].u, i};
    }
  }

  std::vector<std::size_t> rdeg(n, 0);
  for (Vertex v = 0; v < n; ++v) rdeg[v] = off[v + 1] - off[v];
  std::vector<char> alive(edges.size(), 1);
  std::vector<char> used(n, 0);
  std::vector<Edge> remainder;

  // Max residual degree first, lowest index on ties.
  std::set<std::pair<long, Vertex>> queue;
  for (Vertex v = 0; v < n; ++v) {
    if (rdeg[v] > 0) queue.insert({-static_cast<long>(rdeg[v]), v});
  }
  auto kill = [&](std::size_t id) {
    alive[id] = 0;
    for (Vertex x : {edges[id].u, edges[id].v}) {
      queue.erase({-static_cast<long>(rdeg[x]), x});
      --rdeg[x];
      if (rdeg[x] > 0) queue.insert({-static_cast<long>(rdeg[x]), x});
    }
  };

  StarDecomposition out;
  out.degree_threshold = degree_threshold;
  std::vector<std::size_t> star_edges;
  while (!queue.empty()) {
    const Vertex v = queue.begin()->second;
    if (rdeg[v] <= degree_threshold) break;

    star_edges.clear();
    if (!used[v]) {
      for (std::size_t k = off[v]; k < off[v + 1]; ++k) {
        const auto [u, id] = inc[k];
        if (alive[id] && !used[u] && rdeg[u] - 1 <= degree_threshold) {
          star_edges.push_back(id);
        }
      }
      if (star_edges.empty()) {
        for (std::size_t k = off[v]; k < off[v + 1]; ++k) {
          const auto [u, id] = inc[k];
          if (alive[id] && !used[u]) star_edges.push_back(id);
        }
      }
    }
    if (!star_edges.empty()) {
      Star s{v, {}};
      used[v] = 1;
      for (auto id : star_edges) {
        const Vertex u = edges[id].u == v ? edges[id].v : edges[id].u;
        used[u] = 1;
        s.leaves.push_back(u);
        kill(id);
      }
      std::sort(s.leaves.begin(), s.leaves.end());
      out.stars.push_back(std::move(s));
    }
    for (std::size_t k = off[v]; k < off[v + 1]; ++k) {
      const auto id = inc[k].second;
      if (alive[id]) {
        remainder.push_back(edges[id]);
        kill(id);
      }
    }
  }
  for (std::size_t id = 0; id < edges.size(); ++id) {
    if (alive[id]) remainder.push_back(edges[id]);
  }
  std::sort(remainder.begin(), remainder.end());
  out.remainder = Graph::from_sorted_unchecked(n, std::move(remainder));
  std::size_t max_deg = 0;
  for (auto d : out.remainder.degrees()) max_deg = std::max(max_deg, d);
  out.success = max_deg <= degree_threshold;
  return out;
}

}  // namespace sld
