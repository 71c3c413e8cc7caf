#pragma once

#include "mimf/model.hpp"

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mimf {

struct Interval {
   double lo = 0.0;
   double hi = 0.0;

   friend bool operator==( const Interval&, const Interval& ) = default;
};

/// One mixed-integer multilinear term prod_{i} x_i * prod_{j} z_j.
struct MimfTerm {
   std::vector<VarId> continuous;
   std::vector<VarId> binaries;
   /// bounds[i] belongs to continuous[i]
   std::vector<Interval> bounds;

   std::size_t num_continuous() const noexcept { return continuous.size(); }
   std::size_t num_binaries() const noexcept { return binaries.size(); }

   /// Throws RelaxationError on reversed bounds, duplicates, size mismatch or
   /// an empty term.
   void validate() const;
};

/// Box corner with the product of its coordinates.
struct ExtremePoint {
   std::vector<double> coordinates;
   double product_value = 0.0;
};

enum class Formulation { Mc, Fortet, Lambda, FLambda, FRmc };

std::string_view to_string( Formulation f );

/// Auxiliary columns introduced for one term.
struct RelaxationHandle {
   VarId phi_hat;
   VarId z_hat; ///< invalid when the term has no binaries
   std::vector<VarId> lambdas;
   std::vector<VarId> xz_lifted;
   Formulation formulation = Formulation::Mc;

   /// Continuous factors the final bilinear block acts on (frmc: the chained
   /// prefix and the last variable) with their bounds.
   std::vector<VarId> factors;
   std::vector<Interval> factor_bounds;
   /// Intermediate products created by the recursive McCormick chain.
   std::vector<VarId> chain;
   /// Rows appended to the model by this builder call.
   int rows_added = 0;

   bool has_z_hat() const noexcept { return z_hat.valid(); }
};

enum class RelaxationErrc {
   InfiniteBounds,
   ReversedBounds,
   NotBinary,
   NotContinuous,
   ContainsBinaries,
   TooManyVariables,
   TooFewVariables,
   InvalidTerm,
};

class RelaxationError : public std::runtime_error
{
 public:
   RelaxationError( RelaxationErrc code, const std::string& what )
       : std::runtime_error( what ), code_( code )
   {
   }
   RelaxationErrc code() const noexcept { return code_; }

 private:
   RelaxationErrc code_;
};

/// Pool that lets several terms over the same binary set share one z-hat
/// column and its linking rows.
class ZHatPool
{
 public:
   VarId find( std::span<const VarId> binaries ) const;
   void remember( std::span<const VarId> binaries, VarId z_hat );

 private:
   static std::vector<std::int32_t> key( std::span<const VarId> binaries );
   std::map<std::vector<std::int32_t>, VarId> pool_;
};

struct BuildOptions {
   /// Prefix for names of the columns and rows a builder creates.
   std::string prefix = "t";
   /// When set, z-hat columns are reused across terms with the same binaries.
   ZHatPool* shared_z_hat = nullptr;
   /// Permit frmc on terms with a single continuous factor.
   bool rmc_single_factor_fallback = true;
};

/// Corner-product range of a box. Products are formed pairwise left to right.
Interval interval_product_bounds( std::span<const Interval> bounds );

/// 2^n corners in binary counting order: bit i of k selects upper bound of
/// variable i.
std::vector<ExtremePoint> enumerate_extreme_points( std::span<const Interval> bounds );

RelaxationHandle mccormick_bilinear( LinearModel& model, VarId x1, VarId x2, Interval bounds1,
                                     Interval bounds2, const BuildOptions& options = {} );

RelaxationHandle fortet_binary_product( LinearModel& model, std::span<const VarId> binaries,
                                        const BuildOptions& options = {} );

RelaxationHandle lambda_formulation( LinearModel& model, const MimfTerm& term,
                                     const BuildOptions& options = {} );

struct ChainResult {
   VarId lifted;
   Interval bounds;
   std::vector<VarId> intermediates;
   int rows_added = 0;
};

/// Relaxes x1 * ... * x_{n-1} by chained McCormick blocks. With two
/// variables the first one is returned unchanged.
ChainResult recursive_mccormick_chain( LinearModel& model, std::span<const VarId> continuous,
                                       std::span<const Interval> bounds,
                                       const BuildOptions& options = {} );

/// Extreme-point disjunctive formulation.
RelaxationHandle build_f_lambda( LinearModel& model, const MimfTerm& term,
                                 const BuildOptions& options = {} );

/// Recursive-McCormick disjunctive formulation.
RelaxationHandle build_f_rmc( LinearModel& model, const MimfTerm& term,
                              const BuildOptions& options = {} );

RelaxationHandle build_relaxation( LinearModel& model, const MimfTerm& term, Formulation f,
                                   const BuildOptions& options = {} );

/// Exact rows appended by build_f_lambda / build_f_rmc for a term shape,
/// without z-hat sharing.
int f_lambda_row_count( std::size_t num_continuous, std::size_t num_binaries );
int f_rmc_row_count( std::size_t num_continuous, std::size_t num_binaries );

} // namespace mimf
