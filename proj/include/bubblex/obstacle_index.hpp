#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include "bubblex/common.hpp"

namespace bubblex {

struct NearestResult {
  Vec3 point;
  double dist;
};

/// Incremental exact nearest-neighbor index over obstacle points (occupied
/// voxel centers). Internally a kd-tree: points are BST-inserted between
/// full median rebuilds (triggered when the size doubles), so queries stay
/// exact at all times and amortized near O(log n). Ties are broken toward
/// the lexicographically smallest point so results are reproducible.
class ObstacleIndex {
 public:
  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }

  void insert_batch(std::span<const Vec3> pts) {
    for (const Vec3& p : pts) insert(p);
  }

  void insert(const Vec3& p) {
    if (!seen_.insert(key_of(p)).second) return;  // duplicate
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{p, -1, -1});
    if (root_ < 0) {
      root_ = id;
    } else {
      int cur = root_;
      int depth = 0;
      for (;;) {
        const int ax = depth % 3;
        int& child = (p[ax] < nodes_[cur].p[ax]) ? nodes_[cur].left : nodes_[cur].right;
        if (child < 0) {
          child = id;
          break;
        }
        cur = child;
        ++depth;
      }
    }
    if (nodes_.size() >= rebuild_at_) {
      rebuild();
      rebuild_at_ = std::max<std::size_t>(64, nodes_.size() * 2);
    }
  }

  std::optional<NearestResult> nearest(const Vec3& q) const {
    if (nodes_.empty()) return std::nullopt;
    Best best;
    search(root_, 0, q, best);
    return NearestResult{best.p, std::sqrt(best.d2)};
  }

 private:
  struct Node {
    Vec3 p;
    int left, right;
  };
  struct Best {
    double d2 = std::numeric_limits<double>::infinity();
    Vec3 p = Vec3::Zero();
  };

  // Exact bit-pattern key so deduplication never merges distinct points.
  struct PointKey {
    std::array<std::uint64_t, 3> bits;
    bool operator==(const PointKey&) const = default;
  };
  struct PointKeyHash {
    std::size_t operator()(const PointKey& k) const {
      std::uint64_t h = 1469598103934665603ull;
      for (std::uint64_t b : k.bits) h = (h ^ b) * 1099511628211ull;
      return static_cast<std::size_t>(h);
    }
  };
  static PointKey key_of(const Vec3& p) {
    PointKey k{};
    for (int i = 0; i < 3; ++i) {
      const double v = p[i];
      std::memcpy(&k.bits[i], &v, sizeof(v));
    }
    return k;
  }

  void consider(const Vec3& p, const Vec3& q, Best& best) const {
    const double d2 = (p - q).squaredNorm();
    if (d2 < best.d2 || (d2 == best.d2 && lex_less(p, best.p))) {
      best.d2 = d2;
      best.p = p;
    }
  }

  void search(int node, int depth, const Vec3& q, Best& best) const {
    if (node < 0) return;
    const Node& n = nodes_[node];
    consider(n.p, q, best);
    const int ax = depth % 3;
    const double delta = q[ax] - n.p[ax];
    const int near = (delta < 0) ? n.left : n.right;
    const int far = (delta < 0) ? n.right : n.left;
    search(near, depth + 1, q, best);
    if (delta * delta <= best.d2) search(far, depth + 1, q, best);
  }

  void rebuild() {
    std::vector<int> ids(nodes_.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
    root_ = build(ids.begin(), ids.end(), 0);
  }

  template <typename It>
  int build(It first, It last, int depth) {
    if (first == last) return -1;
    const int ax = depth % 3;
    It mid = first + (last - first) / 2;
    std::nth_element(first, mid, last, [&](int a, int b) {
      if (nodes_[a].p[ax] != nodes_[b].p[ax]) return nodes_[a].p[ax] < nodes_[b].p[ax];
      return lex_less(nodes_[a].p, nodes_[b].p);
    });
    const int id = *mid;
    nodes_[id].left = build(first, mid, depth + 1);
    nodes_[id].right = build(mid + 1, last, depth + 1);
    return id;
  }

  std::vector<Node> nodes_;
  std::unordered_set<PointKey, PointKeyHash> seen_;
  int root_ = -1;
  std::size_t rebuild_at_ = 64;
};

}  // namespace bubblex
