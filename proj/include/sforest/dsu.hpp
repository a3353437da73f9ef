#pragma once

#include <vector>

namespace sforest {

// Union-find with path halving. The smallest id in a class is its root, so
// class labels are stable across runs.
struct Dsu {
  std::vector<int> parent;

  explicit Dsu(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) {
      int t = a;
      a = b;
      b = t;
    }
    parent[b] = a;
    return true;
  }
  bool same(int a, int b) { return find(a) == find(b); }
};

}  // namespace sforest
