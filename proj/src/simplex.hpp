#pragma once

#include "mimf/model.hpp"
#include "mimf/solver.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <cstdint>
#include <vector>

namespace mimf::detail {

/// Sparse LU of a basis followed by product-form eta updates.
class BasisFactor
{
 public:
   /// False when the matrix is numerically singular.
   bool factor( const Eigen::SparseMatrix<double>& basis );

   /// v <- B^-1 v
   void ftran( Eigen::VectorXd& v ) const;
   /// v <- B^-T v
   void btran( Eigen::VectorXd& v ) const;

   /// Column `row` of the basis replaced; alpha = B^-1 a_entering.
   void update( int row, const Eigen::VectorXd& alpha );

   int updates() const noexcept { return static_cast<int>( etas_.size() ); }

 private:
   struct Eta {
      int row;
      double pivot;
      std::vector<int> index;
      std::vector<double> value;
   };
   // transpose() is not const in Eigen
   mutable Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
   std::vector<Eta> etas_;
};

/// Bounded primal simplex over the rows of a LinearModel.
///
/// Internally every row i gets a logical column s_i = -a_i x with unit
/// coefficient, so the working system is [A I] (x, s) = 0 and all row senses
/// become bounds on s. Rows and columns are scaled by powers of two. The basis
/// factor is a sparse LU updated in product form; it is rebuilt from scratch
/// periodically or when the residual of the basic solution drifts.
///
/// Column bounds may be changed between calls to solve(); the current basis is
/// kept as the starting point.
class BoundedSimplex
{
 public:
   BoundedSimplex( const LinearModel& model, const LpOptions& options );

   /// Bounds in model units.
   void set_column_bounds( int col, double lower, double upper );
   void reset_column_bounds( int col );

   SolveStatus solve();

   /// Reoptimises after bound changes with the dual simplex when the current
   /// basis came from an optimal solve; otherwise the same as solve().
   SolveStatus solve_dual();

   /// Basis statuses of all columns, enough to restore the basis later.
   std::vector<std::uint8_t> save_basis() const;
   /// Restores a basis saved after an optimal solve with other bounds.
   void load_basis( const std::vector<std::uint8_t>& saved );

   /// Objective in the model's sense (including the constant term).
   double objective() const;
   std::vector<double> primal() const;
   void duals( std::vector<double>& row_duals, std::vector<double>& reduced_costs );

   std::int64_t iterations() const noexcept { return total_iterations_; }

 private:
   enum class Status : std::uint8_t { Basic, AtLower, AtUpper, Free };

   void build_scaling( const LinearModel& model );
   void place_nonbasic( int j );

   template <typename Fn>
   void for_column( int j, Fn&& fn ) const;

   void compute_column( int q, Eigen::VectorXd& alpha ) const;
   void compute_basic_values();
   void compute_duals( bool phase_one );
   void compute_reduced_costs( bool phase_one );
   bool collect_infeasible();
   double basic_residual() const;
   void refactor();
   void pivot( int row, int entering, const Eigen::VectorXd& alpha );
   void repair_singular_basis();
   void row_of_inverse( int row, Eigen::VectorXd& rho ) const;

   int choose_entering( bool bland ) const;
   bool align_nonbasics_with_duals();
   int choose_leaving() const;

   struct RatioResult {
      int row = -1;       // basis position leaving; -1 for bound flip/unbounded
      double step = 0.0;
      bool flip = false;
      bool to_upper = false; // leaving column ends at its upper bound
   };
   RatioResult ratio_test( int q, int dir, const Eigen::VectorXd& alpha, bool bland ) const;

   LpOptions options_;
   int m_ = 0;
   int n_ = 0;
   double sense_ = 1.0;
   double obj_constant_ = 0.0;

   // structural matrix, scaled, column-compressed
   std::vector<int> col_start_;
   std::vector<int> row_index_;
   std::vector<double> value_;

   std::vector<double> col_scale_;
   std::vector<double> row_scale_;
   std::vector<double> cost_;     // size n + m, scaled
   std::vector<double> lower_;    // size n + m, scaled
   std::vector<double> upper_;
   std::vector<double> orig_lower_; // structural, model units
   std::vector<double> orig_upper_;
   std::vector<double> orig_cost_;

   std::vector<Status> status_;
   std::vector<int> basis_;       // position -> column
   std::vector<int> position_;    // column -> position or -1
   std::vector<double> x_;

   BasisFactor factor_;
   Eigen::VectorXd y_;
   std::vector<double> d_;
   std::vector<double> phase_cost_; // per basis position, phase one

   bool values_dirty_ = true;
   bool dual_ready_ = false;
   std::int64_t total_iterations_ = 0;
};

} // namespace mimf::detail
