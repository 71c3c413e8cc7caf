#pragma once

#include "mimf/model.hpp"
#include "mimf/relaxations.hpp"
#include "mimf/solver.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mimf {

enum class BenchErrc { InvalidInstance, EmptyReport, BoundViolation };

class BenchError : public std::runtime_error
{
 public:
   BenchError( BenchErrc code, const std::string& what ) : std::runtime_error( what ), code_( code )
   {
   }
   BenchErrc code() const noexcept { return code_; }

 private:
   BenchErrc code_;
};

/// min sum c x + d z  s.t.  sum_t prod_{j=t}^{t+k-1} x_j z_j >= demand,
/// x in [lower, upper], z binary.
struct Instance {
   std::size_t n = 0;
   std::size_t k = 0;
   std::vector<double> c;
   std::vector<double> d;
   std::vector<double> lower;
   std::vector<double> upper;
   double demand = 0.0;
   std::uint64_t seed = 0;

   std::size_t num_terms() const noexcept { return n >= k ? n - k + 1 : 0; }

   /// Throws BenchError(InvalidInstance) naming the first broken invariant.
   void validate() const;

   friend bool operator==( const Instance&, const Instance& ) = default;
};

/// c, d and lower are drawn in that order from one stream; upper = 10 lower.
Instance generate_instance( std::size_t n, std::size_t k, std::uint64_t seed,
                            double demand_factor = 0.7 );

/// Left-hand side of the demand row at (x, z).
double demand_activity( const Instance& inst, std::span<const double> x,
                        std::span<const double> z );

double instance_objective( const Instance& inst, std::span<const double> x,
                           std::span<const double> z );

struct RelaxedMilp {
   LinearModel model;
   std::vector<VarId> x;
   std::vector<VarId> z;
   std::vector<RelaxationHandle> terms;
   int demand_row = -1;
};

/// Replaces every term by its relaxation (FLambda or FRmc) and adds the
/// demand row over the lifted term columns.
RelaxedMilp build_relaxed_milp( const Instance& inst, Formulation formulation );

struct BenchRow {
   std::size_t n = 0;
   std::size_t k = 0;
   /// Seed of the run; 0 on aggregated rows.
   std::uint64_t seed = 0;
   /// Number of runs folded into the row.
   std::size_t runs = 1;
   Formulation formulation = Formulation::FLambda;
   SolveStatus status = SolveStatus::Optimal;
   double milp_objective = 0.0;
   double lp_bound = 0.0;
   /// NaN when the MILP objective is zero or missing.
   double lp_gap_percent = 0.0;
   double lp_time = 0.0;
   double milp_time = 0.0;
   double bb_nodes = 0.0;
};

struct ExperimentConfig {
   std::vector<std::size_t> n_values{ 20, 50, 100 };
   std::size_t k = 4;
   std::vector<std::uint64_t> seeds{ 1, 2, 3, 4, 5 };
   std::vector<Formulation> formulations{ Formulation::FLambda, Formulation::FRmc };
   double demand_factor = 0.7;
   MilpOptions milp;
};

struct ExperimentResult {
   /// One row per (n, seed, formulation), sorted.
   std::vector<BenchRow> runs;
   /// Median over seeds per (n, formulation); the gap is recomputed from the
   /// median objective and bound.
   std::vector<BenchRow> aggregated;
};

/// Solves the root LP and the MILP of one instance under one formulation.
/// Throws BenchError(BoundViolation) if the LP bound exceeds the MILP optimum.
BenchRow run_single( const Instance& inst, Formulation formulation, const MilpOptions& options = {} );

ExperimentResult run_experiment( const ExperimentConfig& config );

std::vector<BenchRow> aggregate_median( std::vector<BenchRow> rows );

enum class TableFormat { Csv, Markdown };

/// CSV lists every row; Markdown pivots formulations side by side per n.
std::string emit_table( std::vector<BenchRow> rows, TableFormat format );

} // namespace mimf
