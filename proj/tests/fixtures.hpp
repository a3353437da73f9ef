#pragma once

#include "sforest/instance.hpp"

// Shared desk fixtures. matching_gadget is the gadget: demand pairs {s,t} and
// {a_i,b_i}, a unit matching edge per pair, a unit chain s-b_1-...-b_k-t and
// a direct s-t edge of cost 2. relay_path is the five-edge path whose middle pair
// deactivates early.
namespace fixtures {

using sforest::Instance;
using sforest::Rational;

// vertex layout: s=0, t=1, a_i=2+i-1, b_i=2+k+i-1 (i in 1..k)
inline Instance matching_gadget(int k) {
  Instance inst;
  inst.vertex_count = 2 * k + 2;
  auto a = [k](int i) { return 2 + i - 1; };
  auto b = [k](int i) { return 2 + k + i - 1; };
  const int s = 0, t = 1;
  for (int i = 1; i <= k; ++i) inst.edges.push_back({a(i), b(i), Rational(1)});
  inst.edges.push_back({s, b(1), Rational(1)});
  for (int i = 1; i < k; ++i) inst.edges.push_back({b(i), b(i + 1), Rational(1)});
  inst.edges.push_back({b(k), t, Rational(1)});
  inst.edges.push_back({s, t, Rational(2)});
  inst.demands.emplace_back(s, t);
  for (int i = 1; i <= k; ++i) inst.demands.emplace_back(a(i), b(i));
  return inst;
}

inline int gadget_s() { return 0; }
inline int gadget_t() { return 1; }
inline int gadget_a(int k, int i) { (void)k; return 2 + i - 1; }
inline int gadget_b(int k, int i) { return 2 + k + i - 1; }

// vertex layout: a1=0, a2=1, b2=2, a3=3, b1=4, b3=5
inline Instance relay_path(long m_cost = 100) {
  Instance inst;
  inst.vertex_count = 6;
  inst.edges.push_back({0, 1, Rational(3)});        // a1 - a2
  inst.edges.push_back({1, 2, Rational(2)});        // a2 - b2
  inst.edges.push_back({2, 3, Rational(3)});        // b2 - a3
  inst.edges.push_back({3, 4, Rational(m_cost)});   // a3 - b1
  inst.edges.push_back({4, 5, Rational(1)});        // b1 - b3
  inst.demands.emplace_back(0, 4);                  // {a1, b1}
  inst.demands.emplace_back(1, 2);                  // {a2, b2}
  inst.demands.emplace_back(3, 5);                  // {a3, b3}
  return inst;
}

inline constexpr int relay_a1 = 0;
inline constexpr int relay_a2 = 1;
inline constexpr int relay_b2 = 2;
inline constexpr int relay_a3 = 3;
inline constexpr int relay_b1 = 4;
inline constexpr int relay_b3 = 5;

inline Instance single_edge() {
  Instance inst;
  inst.vertex_count = 2;
  inst.edges.push_back({0, 1, Rational(5)});
  inst.demands.emplace_back(0, 1);
  return inst;
}

}  // namespace fixtures
