#pragma once

#include <cstddef>
#include <vector>

#include "irfs/cart.hpp"
#include "irfs/dataset.hpp"
#include "irfs/env.hpp"
#include "irfs/stats.hpp"
#include "irfs/trainers.hpp"

namespace irfs {

/// Top-k features by MI relevance (ties to the lower index), ascending.
std::vector<std::size_t> kbest_select(const Dataset& train, std::size_t k, const BinningSpec& bins = {});

/// Recursive elimination: refit and drop the least important feature (ties
/// drop the higher index) until k remain. Ascending result.
std::vector<std::size_t> dtrfe_select(const Dataset& train, std::size_t k, const TreeConfig& cfg = {});

/// Greedy mRMR, difference form. Returned in pick order.
std::vector<std::size_t> mrmr_select(const Dataset& train, std::size_t k, const BinningSpec& bins = {});

/// Default baseline size: floor(N / 2), at least 1.
std::size_t default_baseline_k(std::size_t num_features);

/// Runs L steps of the loop with advice disabled, whatever its plan says.
BestAccTracker run_marlfs(Environment env, IrfsOptions options, std::size_t steps);

}  // namespace irfs
