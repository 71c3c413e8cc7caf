#pragma once

#include "mimf/model.hpp"

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace mimf {

enum class SolveStatus { Optimal, Infeasible, Unbounded, NodeLimit, IterLimit };

std::string_view to_string( SolveStatus status );

struct SolveResult {
   SolveStatus status = SolveStatus::Infeasible;
   /// Objective of `point` in the model's own sense; NaN when no point exists.
   double objective = 0.0;
   std::vector<double> point;
   std::int64_t lp_iterations = 0;
   std::int64_t bb_nodes = 0;
   double wall_time = 0.0;

   /// Branch-and-bound only: proven bound on the optimum.
   double best_bound = 0.0;
   /// Branch-and-bound only: objective of the root relaxation.
   double root_bound = 0.0;

   /// LP only, filled when status is Optimal. For every structural column j,
   /// reduced_costs[j] = c_j - sum_i row_duals[i] * a_ij.
   std::vector<double> row_duals;
   std::vector<double> reduced_costs;

   bool optimal() const noexcept { return status == SolveStatus::Optimal; }
};

struct LpOptions {
   /// 0 selects the default of 100 * (rows + cols).
   std::int64_t iteration_limit = 0;
   /// Consecutive degenerate pivots before switching to Bland's rule.
   int bland_after_degenerate = 1000;
   bool scale = true;
};

struct MilpOptions {
   std::int64_t node_limit = 100000;
   /// Relative bound gap at which the search stops as Optimal.
   double relative_gap = 1e-6;
   LpOptions lp;
};

/// Solves the continuous relaxation: binaries are relaxed to their bounds.
SolveResult solve_lp( const LinearModel& model, const LpOptions& options = {} );

/// Best-bound branch-and-bound over the binary columns.
SolveResult solve_milp( const LinearModel& model, const MilpOptions& options = {} );
SolveResult solve_milp( const LinearModel& model, std::int64_t node_limit );

/// (opt - lb) / opt * 100; nullopt when opt == 0.
std::optional<double> lp_gap( double opt, double lb );

} // namespace mimf
