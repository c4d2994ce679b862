// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mpdo/grid.hpp"
#include "mpdo/norms.hpp"

namespace mpdo {

// C^infinity step: 0 for t <= 0, 1 for t >= 1.
double smooth_step(double t);
// exp(1 - 1 / (1 - (t / r)^2)) on |t| < r, else 0. Equals 1 at the origin.
double compact_bump(double t, double r);
// 1 on |t| <= inner, 0 on |t| >= outer, smooth in between.
double flat_bump(double t, double inner, double outer);

// Flat-top radial bump: 1 for |y| <= 1, 0 for |y| >= 2, C^infinity.
double lp_phi(double y);
// Dyadic shell k: phi for k = 0, phi(2^{-k} y) - phi(2^{1-k} y) otherwise.
double lp_psi(int k, double y);

// Number of shells needed to cover every frequency of the grid: the smallest
// K with 2^K >= max |xi|.
int lp_kmax(const Grid& g);

struct LPPartition {
  Grid grid;
  Field base;  // phi(|xi|) on the frequency lattice
  int K_max = 0;

  Field shell(int k) const;
};

LPPartition build_lp_partition(const Grid& g);

// Unit-lattice box decomposition sum_nu kappa(xi - nu) chi(xi - nu) = 1 with
// chi band-limited in the dual variable and kappa supported in [-1, 1]^n.
struct UniformPair {
  Grid grid;
  Field kappa;  // kappa(xi_k) on the frequency lattice
  Field chi;    // chi(xi_k) on the frequency lattice
  double c_lower = 0.0;
  double width = 0.45;

  // Dual-side bump nodes and masses: chi(xi) = sum_i mass_i cos(node_i . xi).
  std::vector<Vec> nodes;
  std::vector<double> masses;

  double chi_at(const Vec& xi) const;
  double part_at(const Vec& xi) const;
  double kappa_at(const Vec& xi) const;
};

UniformPair build_uniform_pair(const Grid& g, double width = 0.45);

// kappa(D - nu) f.
Field box_apply(const UniformPair& pair, std::array<int, 2> nu, const Field& f);

// Delta_k sigma: the shell multiplier psi_{k_b}(|D_b|) applied in each of the
// N + 1 variable blocks. k has N + 1 entries.
SampledSymbol delta_block(const SampledSymbol& sigma, std::span<const int> k);

// Shell count per variable block of a sampled symbol.
std::vector<int> block_kmax(const SampledSymbol& sigma);

struct PartitionReport {
  int K_max = 0;
  double lp_residual = 0.0;     // max |sum_k psi_k - 1|
  double lp_support_leak = 0.0; // max |psi_k| outside 2^{k-1} <= |y| <= 2^{k+1}
  double pair_residual = 0.0;   // max |sum_nu kappa chi(xi - nu) - 1|
  double kappa_leak = 0.0;      // max |kappa| outside [-1, 1]^n
  double chi_leak = 0.0;        // share of the dual mass of chi outside B_1
  double c_lower = 0.0;
};
// Residuals of both partitions on the frequency lattice of g and at seeded
// random in-band frequencies.
PartitionReport partition_diagnostics(const Grid& g, int samples, std::uint64_t seed);

}  // namespace mpdo
