#include "sld/clique.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <vector>

namespace sld {

namespace {

class Search {
 public:
  Search(std::vector<std::vector<int>> adj, std::size_t budget)
      : adj_(std::move(adj)), budget_(budget) {}

  CliqueResult run() {
    const int c = static_cast<int>(adj_.size());
    CliqueResult out;
    if (c == 0) return out;
    best_ = 1;
    const auto order = degeneracy_order();
    std::vector<int> rank(c);
    for (int i = 0; i < c; ++i) rank[order[i]] = i;
    std::vector<int> cand;
    for (int v : order) {
      if (aborted_) break;
      cand.clear();
      for (int u : adj_[v]) {
        if (rank[u] > rank[v]) cand.push_back(u);
      }
      if (1 + cand.size() <= best_) continue;
      std::sort(cand.begin(), cand.end());
      expand(1, cand);
    }
    out.size = best_;
    out.exact = !aborted_;
    out.nodes = nodes_;
    return out;
  }

 private:
  std::vector<int> degeneracy_order() const {
    const int c = static_cast<int>(adj_.size());
    std::vector<int> deg(c);
    int maxd = 0;
    for (int v = 0; v < c; ++v) {
      deg[v] = static_cast<int>(adj_[v].size());
      maxd = std::max(maxd, deg[v]);
    }
    std::vector<std::vector<int>> bucket(maxd + 1);
    for (int v = 0; v < c; ++v) bucket[deg[v]].push_back(v);
    std::vector<char> done(c, 0);
    std::vector<int> order;
    order.reserve(c);
    int d = 0;
    while (static_cast<int>(order.size()) < c) {
      d = std::max(0, d - 1);
      while (d <= maxd) {
        // Lazy deletion: entries whose stored degree is stale are skipped.
        while (!bucket[d].empty() &&
               (done[bucket[d].back()] || deg[bucket[d].back()] != d)) {
          bucket[d].pop_back();
        }
        if (!bucket[d].empty()) break;
        ++d;
      }
      const int v = bucket[d].back();
      bucket[d].pop_back();
      done[v] = 1;
      order.push_back(v);
      for (int u : adj_[v]) {
        if (!done[u]) {
          --deg[u];
          bucket[deg[u]].push_back(u);
        }
      }
    }
    return order;
  }

  static void intersect(const std::vector<int>& a, const std::vector<int>& b,
                        std::vector<int>& out) {
    out.clear();
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::back_inserter(out));
  }

  void expand(std::size_t depth, std::vector<int> cand) {
    if (aborted_) return;
    if (++nodes_ > budget_) {
      aborted_ = true;
      return;
    }
    if (cand.empty()) {
      best_ = std::max(best_, depth);
      return;
    }
    if (depth + cand.size() <= best_) return;

    int pivot = cand.front();
    std::size_t pivot_hits = 0;
    std::vector<int> tmp;
    for (int u : cand) {
      intersect(cand, adj_[u], tmp);
      if (tmp.size() >= pivot_hits) {
        if (tmp.size() > pivot_hits || u < pivot) pivot = u;
        pivot_hits = tmp.size();
      }
    }
    std::vector<int> branch;
    std::set_difference(cand.begin(), cand.end(), adj_[pivot].begin(),
                        adj_[pivot].end(), std::back_inserter(branch));
    std::vector<int> remaining = cand;
    std::vector<int> next;
    for (int v : branch) {
      if (depth + remaining.size() <= best_ || aborted_) return;
      intersect(remaining, adj_[v], next);
      expand(depth + 1, next);
      remaining.erase(std::lower_bound(remaining.begin(), remaining.end(), v));
    }
  }

  std::vector<std::vector<int>> adj_;
  std::size_t budget_;
  std::size_t best_ = 0;
  std::size_t nodes_ = 0;
  bool aborted_ = false;
};

}  // namespace

CliqueResult max_clique(const Adjacency& adj, std::span<const Vertex> vertices,
                        std::size_t budget) {
  std::unordered_map<Vertex, int> local;
  local.reserve(vertices.size() * 2);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    local.emplace(vertices[i], static_cast<int>(i));
  }
  std::vector<std::vector<int>> sub(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (Vertex u : adj.neighbors(vertices[i])) {
      auto it = local.find(u);
      if (it != local.end()) sub[i].push_back(it->second);
    }
    std::sort(sub[i].begin(), sub[i].end());
    sub[i].erase(std::unique(sub[i].begin(), sub[i].end()), sub[i].end());
  }
  return Search(std::move(sub), budget).run();
}

CliqueResult max_clique(const Graph& g, std::size_t budget) {
  const Adjacency adj(g);
  std::vector<Vertex> all(g.n());
  std::iota(all.begin(), all.end(), Vertex{0});
  return max_clique(adj, all, budget);
}

}  // namespace sld
