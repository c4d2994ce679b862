// Copyright 2026 The mpdo-lab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <string>
#include <vector>

#include "mpdo/grid.hpp"
#include "mpdo/symbol.hpp"

namespace mpdo {

enum class EvalPath {
  automatic,
  direct,       // per output point, every frequency tuple
  aggregated,   // x-independent symbols: bin tuples by their frequency sum
  modes,        // sum of products a(x) prod_j tau_j(xi_j)
  demodulated,  // x-modulated symbols: output is amp(x) times one constant
};

const char* eval_path_name(EvalPath p);

struct EvalOptions {
  EvalPath path = EvalPath::automatic;
  double cost_cap = 2e8;  // inner symbol evaluations
};

// T_sigma(f_1, ..., f_N) on the common grid of the inputs.
Field evaluate(const SymbolSpec& sigma, std::span<const Field> f, const EvalOptions& opt = {});

// The path evaluate would take with the given options.
EvalPath select_path(const SymbolSpec& sigma, const Grid& g, const EvalOptions& opt = {});

// prod_j m_j(D) f_j for separable x-independent symbols.
Field evaluate_separable_fast(const SymbolSpec& sigma, std::span<const Field> f);

}  // namespace mpdo
