#pragma once
// Derived flags of distributions, Cauchy characteristic bundles, the
// intersection bundles Char V^(i)_{i-1} = V^(i-1) /\ Char V^(i), the refined
// derived type, and the velocity / deceleration signatures derived from it.
#include <string>
#include <utility>
#include <vector>

#include "geometry/linalg.hpp"

namespace gct {

struct DerivedFlag {
  // bundles[j] = V^(j), echelon bases, j = 0..k with V^(k) stabilized.
  std::vector<Distribution> bundles;
  int derived_length() const { return (int)bundles.size() - 1; }
  std::vector<int> ranks() const;
};

// Signature <rho_1,...,rho_k>: rho_i chains of order i; trailing zeros trimmed.
struct Signature {
  std::vector<int> rho;

  Signature() = default;
  explicit Signature(std::vector<int> r) : rho(std::move(r)) { trim(); }
  void trim() {
    while (!rho.empty() && rho.back() == 0) rho.pop_back();
  }
  int k() const { return (int)rho.size(); }
  int num_chains() const;
  // 1 (time) + sum (1+i) rho_i.
  int jet_dim() const;
  bool operator==(const Signature& o) const { return rho == o.rho; }
  std::string str() const;
};

// [[m0,chi0],[m1,chi1_0,chi1],...,[mk,chik]].
struct RefinedDerivedType {
  std::vector<std::vector<int>> rows;
  bool operator==(const RefinedDerivedType& o) const { return rows == o.rows; }
  std::string str() const;
};

DerivedFlag derived_flag(const Distribution& D);

// Largest subbundle C of D with [C, D] in D; returned echelonized and
// verified involutive.
Distribution cauchy_bundle(const Distribution& D);

// Char V^(i)_{i-1} = V^(i-1) /\ Char V^(i), 1 <= i <= k-1.
Distribution intersection_bundle(const DerivedFlag& flag, int i);

// Full flag analysis: flag, Cauchy bundles of each level, intersection
// bundles, refined derived type, vel/decel signatures.
struct FlagAnalysis {
  DerivedFlag flag;
  std::vector<Distribution> cauchy;         // index j = 0..k
  std::vector<Distribution> intersections;  // index i = 1..k-1 (offset by 1)
  RefinedDerivedType type;
  Signature vel, decel;
};

FlagAnalysis analyze_flag(const Distribution& D);

RefinedDerivedType refined_derived_type(const Distribution& D);

// (vel, decel): vel Delta_j = m_j - m_{j-1}; decel_i = Delta_i - Delta_{i+1}
// for i < k, decel_k = Delta_k.
std::pair<Signature, Signature> vel_decel(const DerivedFlag& flag);

}  // namespace gct
