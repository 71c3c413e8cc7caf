#pragma once

#include "mimf/model.hpp"
#include "mimf/relaxations.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mimf {

/// Point of the graph of prod x * prod z at a box corner and binary vector.
struct GraphVertex {
   std::vector<double> x;
   std::vector<int> z;
   double phi = 0.0;
   /// Index of x in enumerate_extreme_points order (0 when the term has no
   /// continuous part).
   std::size_t corner = 0;

   /// (x, z, phi) flattened
   std::vector<double> coordinates() const;
};

/// All 2^(|I|+|J|) vertices; continuous bits are the low bits of the
/// enumeration index. Throws RelaxationError when |I| + |J| > 16.
std::vector<GraphVertex> graph_vertices( const MimfTerm& term );

struct Membership {
   bool inside = false;
   /// Minimal infinity-norm distance found by the LP.
   double slack = 0.0;
};

/// Tests whether `point` lies in the convex hull of `vertices` (within `tolerance`
/// in the infinity norm) by a slack-minimising LP.
Membership membership_in_conv( std::span<const double> point,
                               std::span<const std::vector<double>> vertices,
                               double tolerance = 1e-7 );
bool membership_in_conv( std::span<const double> point, std::span<const GraphVertex> vertices,
                         double tolerance = 1e-7 );

/// Coordinates of one flambda term.
struct LambdaHullPoint {
   std::vector<double> x;
   double phi = 0.0;
   std::vector<double> lambda;
   std::vector<double> z;
   double z_hat = 0.0;
};

/// Coordinates of one frmc term; x holds the effective factors
/// (two, or one for a single continuous factor).
struct RmcHullPoint {
   std::vector<double> x;
   double phi = 0.0;
   std::vector<double> xz;
   std::vector<double> z;
   double z_hat = 0.0;
};

LambdaHullPoint extract_lambda_point( const MimfTerm& term, const RelaxationHandle& handle,
                                      std::span<const double> point );
RmcHullPoint extract_rmc_point( const MimfTerm& term, const RelaxationHandle& handle,
                                std::span<const double> point );

enum class Disjunct { Off, On, Mixed };

template <typename Point>
struct Decomposition {
   /// Off-state member, weight 1 - z_hat. Absent when z_hat = 1.
   std::optional<Point> p0;
   /// On-state member, weight z_hat. Absent when z_hat = 0.
   std::optional<Point> p1;
   double weight = 0.0;
   Disjunct disjunct = Disjunct::Mixed;
   /// Infinity norm of (1 - w) p0 + w p1 - point.
   double residual = 0.0;
   /// Human-readable membership failures of p0 / p1; empty when both are
   /// members of their disjunct.
   std::vector<std::string> violations;

   bool valid() const noexcept { return violations.empty(); }
};

/// Membership in the off set (z_hat = 0) and on set (z = 1, z_hat = 1) of flambda.
std::vector<std::string> check_lambda_off( const LambdaHullPoint& p,
                                           std::span<const Interval> bounds, double tol );
std::vector<std::string> check_lambda_on( const LambdaHullPoint& p,
                                          std::span<const Interval> bounds, double tol );
std::vector<std::string> check_rmc_off( const RmcHullPoint& p, std::span<const Interval> bounds,
                                        double tol );
std::vector<std::string> check_rmc_on( const RmcHullPoint& p, std::span<const Interval> bounds,
                                       double tol );

/// Splits an flambda point into its off/on members. z_hat within 1e-9 of 0
/// or 1 returns the point itself, tagged with its disjunct. Membership of the
/// parts is checked with `tol` scaled by the inverse of the part's weight.
Decomposition<LambdaHullPoint> decompose_lambda_point( const LambdaHullPoint& point,
                                                       std::span<const Interval> bounds,
                                                       double tol = 1e-7 );

/// frmc analogue: q1 = (xz, phi, xz) / z_hat, q0 = (x - xz) / (1 - z_hat).
/// `bounds` are the effective factor bounds.
Decomposition<RmcHullPoint> decompose_rmc_point( const RmcHullPoint& point,
                                                 std::span<const Interval> bounds,
                                                 double tol = 1e-7 );

struct PhiRange {
   bool feasible = false;
   double min = 0.0;
   double max = 0.0;
};

/// Minimises and maximises `phi` over the LP relaxation of `model` with the
/// listed columns fixed.
PhiRange phi_range( const LinearModel& model, VarId phi,
                    std::span<const std::pair<VarId, double>> fixed );

struct Counterexample {
   std::vector<double> direction;
   std::vector<double> point;
   double slack = 0.0;
};

struct ConjectureReport {
   std::size_t num_continuous = 0;
   std::size_t num_binaries = 0;
   std::vector<Interval> bounds;
   Formulation formulation = Formulation::FLambda;
   std::size_t directions_tested = 0;
   std::vector<Counterexample> counterexamples;
   double max_residual = 0.0;
   std::size_t vertices_total = 0;
   std::size_t vertices_lifted = 0;
   double max_lift_violation = 0.0;
   double seconds = 0.0;

   bool holds() const noexcept
   {
      return counterexamples.empty() && vertices_lifted == vertices_total;
   }
};

struct ConjectureOptions {
   std::size_t directions = 100;
   std::uint64_t seed = 1;
   double tolerance = 1e-7;
   Formulation formulation = Formulation::FLambda;
};

/// Probes whether the projection of a term's relaxation onto (x, z, phi)
/// equals the hull of its graph: maximises random directions and tests the
/// projected optimum for membership; also lifts every graph vertex.
ConjectureReport check_projection_conjecture( std::span<const Interval> bounds,
                                              std::size_t num_binaries,
                                              const ConjectureOptions& options = {} );

/// Bounds used by the CLI for a term shape: l in (-1, 1), u = l + (0, 2].
std::vector<Interval> sample_term_bounds( std::size_t num_continuous, std::uint64_t seed );

} // namespace mimf
