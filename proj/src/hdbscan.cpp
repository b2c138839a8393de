#include "uavmag/hdbscan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace uavmag {

namespace {

struct Edge {
  std::size_t a, b;
  double w;
};

class DisjointSet {
 public:
  explicit DisjointSet(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite_into(std::size_t child, std::size_t root) { parent_[find(child)] = find(root); }

 private:
  std::vector<std::size_t> parent_;
};

double dist(const Point2& p, const Point2& q) { return std::hypot(p.x - q.x, p.y - q.y); }

std::vector<double> core_distances(std::span<const Point2> pts, std::size_t k) {
  const std::size_t n = pts.size();
  std::vector<double> core(n);
  std::vector<double> row(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) row[j] = dist(pts[i], pts[j]);
    // k-th smallest including the zero self-distance.
    std::nth_element(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k - 1), row.end());
    core[i] = row[k - 1];
  }
  return core;
}

// Prim on the dense mutual-reachability graph.
std::vector<Edge> mst(std::span<const Point2> pts, const std::vector<double>& core) {
  const std::size_t n = pts.size();
  std::vector<Edge> edges;
  edges.reserve(n - 1);
  std::vector<bool> in_tree(n, false);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> from(n, 0);
  std::size_t current = 0;
  in_tree[0] = true;
  for (std::size_t step = 1; step < n; ++step) {
    std::size_t next = n;
    double next_w = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (in_tree[j]) continue;
      const double w = std::max({core[current], core[j], dist(pts[current], pts[j])});
      if (w < best[j]) {
        best[j] = w;
        from[j] = current;
      }
      if (best[j] < next_w) {
        next_w = best[j];
        next = j;
      }
    }
    in_tree[next] = true;
    edges.push_back(Edge{from[next], next, next_w});
    current = next;
  }
  return edges;
}

// Multiway single-linkage hierarchy. Nodes [0, n) are points; later nodes
// merge every component joined at one distance level.
struct Hierarchy {
  std::vector<std::vector<std::size_t>> children;
  std::vector<double> distance;
  std::vector<std::size_t> size;
};

Hierarchy build_hierarchy(std::size_t n, std::vector<Edge> edges) {
  std::sort(edges.begin(), edges.end(), [](const Edge& l, const Edge& r) { return l.w < r.w; });
  Hierarchy h;
  h.children.resize(n);
  h.distance.assign(n, 0.0);
  h.size.assign(n, 1);
  DisjointSet ds(2 * n);
  std::vector<std::size_t> node_of(2 * n);
  std::iota(node_of.begin(), node_of.end(), std::size_t{0});
  std::size_t i = 0;
  while (i < edges.size()) {
    std::size_t j = i;
    while (j < edges.size() && edges[j].w == edges[i].w) ++j;
    // Components linked by this level, possibly through several edges.
    DisjointSet level(2 * n);
    std::vector<std::size_t> touched;
    for (std::size_t e = i; e < j; ++e) {
      const std::size_t ra = ds.find(edges[e].a);
      const std::size_t rb = ds.find(edges[e].b);
      touched.push_back(ra);
      touched.push_back(rb);
      level.unite_into(ra, rb);
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (const std::size_t r : touched) groups[level.find(r)].push_back(r);
    for (auto& [key, members] : groups) {
      const std::size_t node = h.children.size();
      std::vector<std::size_t> kids;
      std::size_t total = 0;
      for (const std::size_t r : members) {
        kids.push_back(node_of[r]);
        total += h.size[node_of[r]];
      }
      h.children.push_back(std::move(kids));
      h.distance.push_back(edges[i].w);
      h.size.push_back(total);
      for (std::size_t m = 1; m < members.size(); ++m) ds.unite_into(members[m], members[0]);
      node_of[ds.find(members[0])] = node;
    }
    i = j;
  }
  return h;
}

double lambda_of(double d) { return 1.0 / std::max(d, 1e-12); }

struct CondensedTree {
  // Rows: parent cluster -> child (point id < n, or cluster id >= n).
  struct Row {
    std::size_t parent, child;
    double lambda;
    std::size_t size;
  };
  std::vector<Row> rows;
  std::size_t n_points = 0;
  std::size_t next_cluster = 0;
};

void collect_points(const Hierarchy& h, std::size_t node, std::vector<std::size_t>& out) {
  std::vector<std::size_t> stack{node};
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    if (h.children[v].empty()) out.push_back(v);
    for (const std::size_t c : h.children[v]) stack.push_back(c);
  }
}

CondensedTree condense(const Hierarchy& h, std::size_t n, std::size_t min_size) {
  CondensedTree t;
  t.n_points = n;
  t.next_cluster = n + 1;
  const std::size_t root = h.children.size() - 1;
  // (hierarchy node, condensed cluster it currently belongs to)
  std::vector<std::pair<std::size_t, std::size_t>> stack{{root, n}};
  std::vector<std::size_t> pts;
  while (!stack.empty()) {
    const auto [node, cluster] = stack.back();
    stack.pop_back();
    if (h.children[node].empty()) {
      // A lone point that is its own cluster can only occur for n == 1.
      continue;
    }
    const double lam = lambda_of(h.distance[node]);
    std::vector<std::size_t> big;
    for (const std::size_t c : h.children[node])
      if (h.size[c] >= min_size) big.push_back(c);
    for (const std::size_t c : h.children[node]) {
      if (h.size[c] >= min_size) continue;
      pts.clear();
      collect_points(h, c, pts);
      for (const std::size_t p : pts) t.rows.push_back({cluster, p, lam, 1});
    }
    if (big.size() == 1) {
      stack.emplace_back(big[0], cluster);
    } else {
      for (const std::size_t c : big) {
        const std::size_t id = t.next_cluster++;
        t.rows.push_back({cluster, id, lam, h.size[c]});
        stack.emplace_back(c, id);
      }
    }
  }
  return t;
}

}  // namespace

HdbscanResult hdbscan(std::span<const Point2> points, const HdbscanOptions& options) {
  if (options.min_cluster_size < 2) throw std::invalid_argument("hdbscan: min_cluster_size must be >= 2");
  const std::size_t n = points.size();
  HdbscanResult result;
  result.labels.assign(n, -1);
  const std::size_t k = options.min_samples == 0 ? options.min_cluster_size : options.min_samples;
  if (n < options.min_cluster_size || n < k || n < 2) return result;

  const auto core = core_distances(points, k);
  const auto hierarchy = build_hierarchy(n, mst(points, core));
  const auto tree = condense(hierarchy, n, options.min_cluster_size);
  const std::size_t root = n;
  const std::size_t n_clusters_total = tree.next_cluster - n;

  // Birth lambda, parent, children and stability of every condensed cluster.
  std::vector<double> birth(n_clusters_total, 0.0);
  std::vector<std::size_t> parent(n_clusters_total, root);
  std::vector<std::vector<std::size_t>> kids(n_clusters_total);
  for (const auto& r : tree.rows) {
    if (r.child >= n) {
      birth[r.child - n] = r.lambda;
      parent[r.child - n] = r.parent;
      kids[r.parent - n].push_back(r.child);
    }
  }
  std::vector<double> stability(n_clusters_total, 0.0);
  for (const auto& r : tree.rows)
    stability[r.parent - n] += (r.lambda - birth[r.parent - n]) * static_cast<double>(r.size);

  // Excess of mass, bottom-up (children always carry larger ids).
  std::vector<bool> selected(n_clusters_total, false);
  auto clear_below = [&](std::size_t c) {
    std::vector<std::size_t> st(kids[c - n].begin(), kids[c - n].end());
    while (!st.empty()) {
      const std::size_t v = st.back();
      st.pop_back();
      selected[v - n] = false;
      for (const std::size_t w : kids[v - n]) st.push_back(w);
    }
  };
  for (std::size_t id = tree.next_cluster; id-- > n;) {
    if (id == root && !options.allow_single_cluster) continue;
    double sub = 0.0;
    for (const std::size_t c : kids[id - n]) sub += stability[c - n];
    if (!kids[id - n].empty() && sub > stability[id - n]) {
      stability[id - n] = sub;
    } else {
      selected[id - n] = true;
      clear_below(id);
    }
  }
  if (!options.allow_single_cluster) selected[0] = false;

  const double eps = options.cluster_selection_epsilon;
  if (eps > 0.0 && n_clusters_total > 1) {
    std::vector<std::size_t> eom;
    for (std::size_t id = n; id < tree.next_cluster; ++id)
      if (selected[id - n]) eom.push_back(id);
    const bool root_only = eom.size() == 1 && eom[0] == root;
    std::vector<bool> chosen(n_clusters_total, false);
    if (root_only) {
      chosen[0] = options.allow_single_cluster;
    } else {
      for (const std::size_t leaf : eom) {
        std::size_t c = leaf;
        if (1.0 / birth[c - n] < eps) {
          // Climb to the ancestor alive at distance eps.
          while (true) {
            const std::size_t p = parent[c - n];
            if (p == root) {
              if (options.allow_single_cluster) c = p;
              break;
            }
            c = p;
            if (1.0 / birth[c - n] > eps) break;
          }
        }
        chosen[c - n] = true;
      }
      // Keep only the topmost of nested choices.
      for (std::size_t id = n; id < tree.next_cluster; ++id) {
        if (!chosen[id - n]) continue;
        for (std::size_t p = id; p != root;) {
          p = parent[p - n];
          if (chosen[p - n]) {
            chosen[id - n] = false;
            break;
          }
        }
      }
    }
    selected = chosen;
  }

  // Label points: a point belongs to the selected cluster above it, if any.
  std::vector<std::size_t> owner(n_clusters_total);
  std::vector<bool> has_owner(n_clusters_total, false);
  for (std::size_t id = n; id < tree.next_cluster; ++id) {
    if (selected[id - n]) {
      owner[id - n] = id;
      has_owner[id - n] = true;
    } else if (id != root && has_owner[parent[id - n] - n]) {
      owner[id - n] = owner[parent[id - n] - n];
      has_owner[id - n] = true;
    }
  }
  std::size_t selected_count = 0;
  for (std::size_t c = 0; c < n_clusters_total; ++c) selected_count += selected[c] ? 1 : 0;
  std::vector<long> raw(n, -1);
  for (const auto& r : tree.rows) {
    if (r.child >= n || !has_owner[r.parent - n]) continue;
    const std::size_t c = owner[r.parent - n];
    if (c == root) {
      // Root as the single cluster: only points that stay past distance eps,
      // or past the densest drop-out when eps is off.
      double cut = 0.0;
      if (eps > 0.0) {
        cut = 1.0 / eps;
      } else {
        for (const auto& q : tree.rows)
          if (q.parent == root) cut = std::max(cut, q.lambda);
      }
      if (selected_count == 1 && r.lambda >= cut) raw[r.child] = static_cast<long>(c);
    } else {
      raw[r.child] = static_cast<long>(c);
    }
  }

  // Drop clusters left with too few members, then number by centroid.
  std::map<long, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < n; ++i)
    if (raw[i] >= 0) members[raw[i]].push_back(i);
  struct Found {
    double cx, cy;
    const std::vector<std::size_t>* idx;
  };
  std::vector<Found> found;
  for (const auto& [id, idx] : members) {
    if (idx.size() < options.min_cluster_size) continue;
    double sx = 0.0, sy = 0.0;
    for (const std::size_t i : idx) {
      sx += points[i].x;
      sy += points[i].y;
    }
    found.push_back({sx / static_cast<double>(idx.size()), sy / static_cast<double>(idx.size()), &idx});
  }
  std::sort(found.begin(), found.end(),
            [](const Found& a, const Found& b) { return a.cx != b.cx ? a.cx < b.cx : a.cy < b.cy; });
  for (std::size_t k2 = 0; k2 < found.size(); ++k2)
    for (const std::size_t i : *found[k2].idx) result.labels[i] = static_cast<int>(k2);
  result.n_clusters = found.size();
  return result;
}

}  // namespace uavmag
