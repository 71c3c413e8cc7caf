#include "mimf/relaxations.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace mimf {

namespace {

std::string
column_name( const LinearModel& model, const BuildOptions& options, const std::string& tag )
{
   std::string name = options.prefix + "_" + tag;
   if( model.find_variable( name ).valid() )
      name += "_" + std::to_string( model.num_variables() );
   return name;
}

std::string
row_name( const LinearModel& model, const BuildOptions& options, const std::string& tag )
{
   std::string name = options.prefix + "_" + tag;
   if( model.has_constraint_named( name ) )
      name += "_" + std::to_string( model.num_constraints() );
   return name;
}

void
require_finite( Interval b, const char* what )
{
   if( !std::isfinite( b.lo ) || !std::isfinite( b.hi ) )
      throw RelaxationError( RelaxationErrc::InfiniteBounds,
                             std::string( what ) + ": bounds must be finite" );
   if( b.lo > b.hi )
      throw RelaxationError( RelaxationErrc::ReversedBounds,
                             std::string( what ) + ": reversed bounds" );
}

Interval
multiply( Interval a, Interval b )
{
   const double p[4] = { a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi };
   return { *std::min_element( p, p + 4 ), *std::max_element( p, p + 4 ) };
}

/// Box for a column that is zero in the off state and within `b` in the on state.
Interval
with_zero( Interval b )
{
   return { std::min( 0.0, b.lo ), std::max( 0.0, b.hi ) };
}

struct ZHat {
   VarId column;
   int rows = 0;
};

ZHat
add_z_hat( LinearModel& model, std::span<const VarId> binaries, const BuildOptions& options )
{
   for( VarId z : binaries )
      if( model.variable( z ).kind != VarKind::Binary )
         throw RelaxationError( RelaxationErrc::NotBinary,
                                "'" + model.variable( z ).name + "' is not binary" );
   if( binaries.empty() )
      throw RelaxationError( RelaxationErrc::TooFewVariables, "binary product needs |J| >= 1" );

   if( options.shared_z_hat != nullptr )
   {
      VarId found = options.shared_z_hat->find( binaries );
      if( found.valid() )
         return { found, 0 };
   }

   const VarId zh = model.add_variable( column_name( model, options, "zhat" ), 0.0, 1.0 );
   for( std::size_t j = 0; j < binaries.size(); ++j )
      model.add_constraint( LinearExpr().add( zh, 1.0 ).add( binaries[j], -1.0 ),
                            RowSense::LessEqual, 0.0,
                            row_name( model, options, "zhat_le_z" + std::to_string( j ) ) );
   LinearExpr lower;
   lower.add( zh, 1.0 );
   for( VarId z : binaries )
      lower.add( z, -1.0 );
   model.add_constraint( lower, RowSense::GreaterEqual,
                         1.0 - static_cast<double>( binaries.size() ),
                         row_name( model, options, "zhat_ge_sum" ) );

   if( options.shared_z_hat != nullptr )
      options.shared_z_hat->remember( binaries, zh );
   return { zh, static_cast<int>( binaries.size() ) + 1 };
}

void
check_continuous( const LinearModel& model, VarId x )
{
   if( model.variable( x ).kind != VarKind::Continuous )
      throw RelaxationError( RelaxationErrc::NotContinuous,
                             "'" + model.variable( x ).name + "' is not continuous" );
}

/// Adds xz with on/off bound rows and linking rows to the factor x in [b.lo, b.hi].
VarId
add_lifted_factor( LinearModel& model, VarId x, Interval b, VarId zh,
                   const BuildOptions& options, const std::string& tag )
{
   const VarId xz = model.add_variable( column_name( model, options, tag ),
                                        with_zero( b ).lo, with_zero( b ).hi );
   // z_hat * l <= xz <= z_hat * u
   model.add_constraint( LinearExpr().add( xz, 1.0 ).add( zh, -b.lo ), RowSense::GreaterEqual,
                         0.0, row_name( model, options, tag + "_on_lo" ) );
   model.add_constraint( LinearExpr().add( xz, 1.0 ).add( zh, -b.hi ), RowSense::LessEqual, 0.0,
                         row_name( model, options, tag + "_on_up" ) );
   // x - (1 - z_hat) u <= xz <= x - (1 - z_hat) l
   model.add_constraint( LinearExpr().add( xz, 1.0 ).add( x, -1.0 ).add( zh, -b.hi ),
                         RowSense::GreaterEqual, -b.hi,
                         row_name( model, options, tag + "_off_lo" ) );
   model.add_constraint( LinearExpr().add( xz, 1.0 ).add( x, -1.0 ).add( zh, -b.lo ),
                         RowSense::LessEqual, -b.lo, row_name( model, options, tag + "_off_up" ) );
   return xz;
}

} // namespace

std::string_view
to_string( Formulation f )
{
   switch( f )
   {
   case Formulation::Mc: return "mc";
   case Formulation::Fortet: return "fortet";
   case Formulation::Lambda: return "lambda";
   case Formulation::FLambda: return "flambda";
   case Formulation::FRmc: return "frmc";
   }
   return "unknown";
}

void
MimfTerm::validate() const
{
   if( bounds.size() != continuous.size() )
      throw RelaxationError( RelaxationErrc::InvalidTerm,
                             "term needs one bound pair per continuous variable" );
   if( continuous.empty() && binaries.empty() )
      throw RelaxationError( RelaxationErrc::InvalidTerm, "term has no variables" );
   for( Interval b : bounds )
      require_finite( b, "term" );

   std::set<std::int32_t> seen;
   for( VarId v : continuous )
      if( !seen.insert( v.index ).second )
         throw RelaxationError( RelaxationErrc::InvalidTerm, "duplicate continuous variable" );
   for( VarId v : binaries )
      if( !seen.insert( v.index ).second )
         throw RelaxationError( RelaxationErrc::InvalidTerm, "duplicate binary variable" );
}

std::vector<std::int32_t>
ZHatPool::key( std::span<const VarId> binaries )
{
   std::vector<std::int32_t> k;
   for( VarId z : binaries )
      k.push_back( z.index );
   std::sort( k.begin(), k.end() );
   return k;
}

VarId
ZHatPool::find( std::span<const VarId> binaries ) const
{
   auto it = pool_.find( key( binaries ) );
   return it == pool_.end() ? VarId{} : it->second;
}

void
ZHatPool::remember( std::span<const VarId> binaries, VarId z_hat )
{
   pool_[key( binaries )] = z_hat;
}

Interval
interval_product_bounds( std::span<const Interval> bounds )
{
   Interval acc{ 1.0, 1.0 };
   for( Interval b : bounds )
   {
      require_finite( b, "interval_product_bounds" );
      acc = multiply( acc, b );
   }
   return acc;
}

std::vector<ExtremePoint>
enumerate_extreme_points( std::span<const Interval> bounds )
{
   if( bounds.empty() )
      throw RelaxationError( RelaxationErrc::TooFewVariables, "need at least one variable" );
   if( bounds.size() > 30 )
      throw RelaxationError( RelaxationErrc::TooManyVariables,
                             "more than 30 variables would need over 2^30 extreme points" );
   for( Interval b : bounds )
      require_finite( b, "enumerate_extreme_points" );

   const std::size_t dim = bounds.size();
   const std::size_t count = std::size_t{ 1 } << dim;
   std::vector<ExtremePoint> points( count );
   for( std::size_t k = 0; k < count; ++k )
   {
      ExtremePoint& p = points[k];
      p.coordinates.resize( dim );
      p.product_value = 1.0;
      for( std::size_t i = 0; i < dim; ++i )
      {
         p.coordinates[i] = ( k >> i ) & 1 ? bounds[i].hi : bounds[i].lo;
         p.product_value *= p.coordinates[i];
      }
   }
   return points;
}

RelaxationHandle
mccormick_bilinear( LinearModel& model, VarId x1, VarId x2, Interval b1, Interval b2,
                    const BuildOptions& options )
{
   require_finite( b1, "mccormick_bilinear" );
   require_finite( b2, "mccormick_bilinear" );
   check_continuous( model, x1 );
   check_continuous( model, x2 );

   const Interval range = multiply( b1, b2 );
   RelaxationHandle h;
   h.formulation = Formulation::Mc;
   h.phi_hat = model.add_variable( column_name( model, options, "mc" ), range.lo, range.hi );
   h.factors = { x1, x2 };
   h.factor_bounds = { b1, b2 };

   const auto row = [&]( double c1, double c2, RowSense sense, double rhs, const char* tag ) {
      model.add_constraint( LinearExpr().add( h.phi_hat, 1.0 ).add( x1, -c1 ).add( x2, -c2 ),
                            sense, rhs, row_name( model, options, tag ) );
   };
   row( b2.hi, b1.hi, RowSense::GreaterEqual, -b1.hi * b2.hi, "mc_ge_uu" );
   row( b2.lo, b1.lo, RowSense::GreaterEqual, -b1.lo * b2.lo, "mc_ge_ll" );
   row( b2.hi, b1.lo, RowSense::LessEqual, -b1.lo * b2.hi, "mc_le_lu" );
   row( b2.lo, b1.hi, RowSense::LessEqual, -b1.hi * b2.lo, "mc_le_ul" );
   h.rows_added = 4;
   return h;
}

RelaxationHandle
fortet_binary_product( LinearModel& model, std::span<const VarId> binaries,
                       const BuildOptions& options )
{
   const ZHat zh = add_z_hat( model, binaries, options );
   RelaxationHandle h;
   h.formulation = Formulation::Fortet;
   h.z_hat = zh.column;
   h.phi_hat = zh.column;
   h.rows_added = zh.rows;
   return h;
}

RelaxationHandle
lambda_formulation( LinearModel& model, const MimfTerm& term, const BuildOptions& options )
{
   term.validate();
   if( !term.binaries.empty() )
      throw RelaxationError( RelaxationErrc::ContainsBinaries,
                             "lambda_formulation takes continuous-only terms" );
   for( VarId x : term.continuous )
      check_continuous( model, x );

   const auto points = enumerate_extreme_points( term.bounds );
   const Interval range = interval_product_bounds( term.bounds );

   RelaxationHandle h;
   h.formulation = Formulation::Lambda;
   h.phi_hat = model.add_variable( column_name( model, options, "phi" ), range.lo, range.hi );
   for( std::size_t k = 0; k < points.size(); ++k )
      h.lambdas.push_back(
          model.add_variable( column_name( model, options, "lambda" + std::to_string( k ) ), 0.0,
                              1.0 ) );

   LinearExpr simplex;
   LinearExpr phi;
   phi.add( h.phi_hat, 1.0 );
   for( std::size_t k = 0; k < points.size(); ++k )
   {
      simplex.add( h.lambdas[k], 1.0 );
      phi.add( h.lambdas[k], -points[k].product_value );
   }
   model.add_constraint( simplex, RowSense::Equal, 1.0, row_name( model, options, "lambda_sum" ) );
   model.add_constraint( phi, RowSense::Equal, 0.0, row_name( model, options, "phi_def" ) );
   for( std::size_t i = 0; i < term.continuous.size(); ++i )
   {
      LinearExpr link;
      link.add( term.continuous[i], 1.0 );
      for( std::size_t k = 0; k < points.size(); ++k )
         link.add( h.lambdas[k], -points[k].coordinates[i] );
      model.add_constraint( link, RowSense::Equal, 0.0,
                            row_name( model, options, "x" + std::to_string( i ) + "_conv" ) );
   }
   h.factors = term.continuous;
   h.factor_bounds = term.bounds;
   h.rows_added = static_cast<int>( term.continuous.size() ) + 2;
   return h;
}

ChainResult
recursive_mccormick_chain( LinearModel& model, std::span<const VarId> continuous,
                           std::span<const Interval> bounds, const BuildOptions& options )
{
   if( continuous.size() < 2 )
      throw RelaxationError( RelaxationErrc::TooFewVariables,
                             "recursive McCormick chain needs |I| >= 2" );
   if( bounds.size() != continuous.size() )
      throw RelaxationError( RelaxationErrc::InvalidTerm, "one bound pair per variable" );

   ChainResult chain;
   chain.lifted = continuous[0];
   chain.bounds = bounds[0];
   require_finite( chain.bounds, "recursive_mccormick_chain" );
   for( std::size_t t = 1; t + 1 < continuous.size(); ++t )
   {
      BuildOptions block = options;
      block.prefix = options.prefix + "_w" + std::to_string( t + 1 );
      RelaxationHandle h =
          mccormick_bilinear( model, chain.lifted, continuous[t], chain.bounds, bounds[t], block );
      chain.lifted = h.phi_hat;
      chain.bounds = multiply( chain.bounds, bounds[t] );
      chain.intermediates.push_back( h.phi_hat );
      chain.rows_added += h.rows_added;
   }
   return chain;
}

RelaxationHandle
build_f_lambda( LinearModel& model, const MimfTerm& term, const BuildOptions& options )
{
   term.validate();
   if( term.continuous.empty() )
      return fortet_binary_product( model, term.binaries, options );
   if( term.binaries.empty() )
      return lambda_formulation( model, term, options );
   for( VarId x : term.continuous )
      check_continuous( model, x );

   const auto points = enumerate_extreme_points( term.bounds );
   const Interval range = with_zero( interval_product_bounds( term.bounds ) );

   RelaxationHandle h;
   h.formulation = Formulation::FLambda;
   const ZHat zh = add_z_hat( model, term.binaries, options );
   h.z_hat = zh.column;
   h.rows_added = zh.rows;
   h.phi_hat = model.add_variable( column_name( model, options, "phi" ), range.lo, range.hi );
   for( std::size_t k = 0; k < points.size(); ++k )
      h.lambdas.push_back(
          model.add_variable( column_name( model, options, "lambda" + std::to_string( k ) ), 0.0,
                              1.0 ) );

   // 1'lambda = z_hat
   LinearExpr simplex;
   simplex.add( h.z_hat, -1.0 );
   LinearExpr phi;
   phi.add( h.phi_hat, 1.0 );
   for( std::size_t k = 0; k < points.size(); ++k )
   {
      simplex.add( h.lambdas[k], 1.0 );
      phi.add( h.lambdas[k], -points[k].product_value );
   }
   model.add_constraint( simplex, RowSense::Equal, 0.0, row_name( model, options, "lambda_sum" ) );
   model.add_constraint( phi, RowSense::Equal, 0.0, row_name( model, options, "phi_def" ) );

   // sum lambda xi + l (1 - z_hat) <= x <= sum lambda xi + u (1 - z_hat)
   for( std::size_t i = 0; i < term.continuous.size(); ++i )
   {
      LinearExpr link;
      link.add( term.continuous[i], 1.0 );
      for( std::size_t k = 0; k < points.size(); ++k )
         link.add( h.lambdas[k], -points[k].coordinates[i] );
      const Interval b = term.bounds[i];
      const std::string tag = "x" + std::to_string( i );
      model.add_constraint( LinearExpr( link ).add( h.z_hat, b.lo ), RowSense::GreaterEqual,
                            b.lo, row_name( model, options, tag + "_lo" ) );
      model.add_constraint( LinearExpr( link ).add( h.z_hat, b.hi ), RowSense::LessEqual, b.hi,
                            row_name( model, options, tag + "_up" ) );
   }
   h.factors = term.continuous;
   h.factor_bounds = term.bounds;
   h.rows_added += 2 + 2 * static_cast<int>( term.continuous.size() );
   return h;
}

RelaxationHandle
build_f_rmc( LinearModel& model, const MimfTerm& term, const BuildOptions& options )
{
   term.validate();
   const std::size_t ni = term.continuous.size();
   if( ni == 0 )
      return fortet_binary_product( model, term.binaries, options );
   for( VarId x : term.continuous )
      check_continuous( model, x );

   if( term.binaries.empty() )
   {
      if( ni == 1 )
      {
         RelaxationHandle h;
         h.formulation = Formulation::Mc;
         const Interval b = term.bounds[0];
         h.phi_hat = model.add_variable( column_name( model, options, "phi" ), b.lo, b.hi );
         model.add_constraint( LinearExpr().add( h.phi_hat, 1.0 ).add( term.continuous[0], -1.0 ),
                               RowSense::Equal, 0.0, row_name( model, options, "phi_def" ) );
         h.factors = term.continuous;
         h.factor_bounds = term.bounds;
         h.rows_added = 1;
         return h;
      }
      ChainResult chain = recursive_mccormick_chain( model, term.continuous, term.bounds, options );
      RelaxationHandle h = mccormick_bilinear( model, chain.lifted, term.continuous.back(),
                                               chain.bounds, term.bounds.back(), options );
      h.chain = std::move( chain.intermediates );
      h.rows_added += chain.rows_added;
      return h;
   }

   if( ni == 1 )
   {
      if( !options.rmc_single_factor_fallback )
         throw RelaxationError( RelaxationErrc::TooFewVariables,
                                "frmc needs |I| >= 2 unless the fallback is enabled" );
      RelaxationHandle h;
      h.formulation = Formulation::FRmc;
      const ZHat zh = add_z_hat( model, term.binaries, options );
      h.z_hat = zh.column;
      const Interval b = term.bounds[0];
      h.xz_lifted.push_back( add_lifted_factor( model, term.continuous[0], b, h.z_hat, options, "xz1" ) );
      h.phi_hat = model.add_variable( column_name( model, options, "phi" ), with_zero( b ).lo,
                                      with_zero( b ).hi );
      model.add_constraint( LinearExpr().add( h.phi_hat, 1.0 ).add( h.xz_lifted[0], -1.0 ),
                            RowSense::Equal, 0.0, row_name( model, options, "phi_def" ) );
      h.factors = term.continuous;
      h.factor_bounds = term.bounds;
      h.rows_added = zh.rows + 5;
      return h;
   }

   ChainResult chain = recursive_mccormick_chain(
       model, std::span( term.continuous ).first( ni ), term.bounds, options );
   const VarId f1 = chain.lifted;
   const Interval b1 = chain.bounds;
   const VarId f2 = term.continuous.back();
   const Interval b2 = term.bounds.back();

   RelaxationHandle h;
   h.formulation = Formulation::FRmc;
   h.chain = std::move( chain.intermediates );
   const ZHat zh = add_z_hat( model, term.binaries, options );
   h.z_hat = zh.column;
   h.xz_lifted.push_back( add_lifted_factor( model, f1, b1, h.z_hat, options, "xz1" ) );
   h.xz_lifted.push_back( add_lifted_factor( model, f2, b2, h.z_hat, options, "xz2" ) );

   const Interval range = with_zero( multiply( b1, b2 ) );
   h.phi_hat = model.add_variable( column_name( model, options, "phi" ), range.lo, range.hi );

   const VarId xz1 = h.xz_lifted[0];
   const VarId xz2 = h.xz_lifted[1];
   const auto row = [&]( double c1, double c2, double cz, RowSense sense, const char* tag ) {
      model.add_constraint(
          LinearExpr().add( h.phi_hat, 1.0 ).add( xz1, -c1 ).add( xz2, -c2 ).add( h.z_hat, cz ),
          sense, 0.0, row_name( model, options, tag ) );
   };
   row( b2.hi, b1.hi, b1.hi * b2.hi, RowSense::GreaterEqual, "pmc_ge_uu" );
   row( b2.lo, b1.lo, b1.lo * b2.lo, RowSense::GreaterEqual, "pmc_ge_ll" );
   row( b2.hi, b1.lo, b1.lo * b2.hi, RowSense::LessEqual, "pmc_le_lu" );
   row( b2.lo, b1.hi, b1.hi * b2.lo, RowSense::LessEqual, "pmc_le_ul" );

   h.factors = { f1, f2 };
   h.factor_bounds = { b1, b2 };
   h.rows_added = chain.rows_added + zh.rows + 8 + 4;
   return h;
}

RelaxationHandle
build_relaxation( LinearModel& model, const MimfTerm& term, Formulation f,
                  const BuildOptions& options )
{
   switch( f )
   {
   case Formulation::FLambda: return build_f_lambda( model, term, options );
   case Formulation::FRmc: return build_f_rmc( model, term, options );
   case Formulation::Lambda: return lambda_formulation( model, term, options );
   case Formulation::Fortet:
      term.validate();
      return fortet_binary_product( model, term.binaries, options );
   case Formulation::Mc:
      term.validate();
      if( term.continuous.size() != 2 || !term.binaries.empty() )
         throw RelaxationError( RelaxationErrc::InvalidTerm,
                                "McCormick needs exactly two continuous factors" );
      return mccormick_bilinear( model, term.continuous[0], term.continuous[1], term.bounds[0],
                                 term.bounds[1], options );
   }
   throw RelaxationError( RelaxationErrc::InvalidTerm, "unknown formulation" );
}

int
f_lambda_row_count( std::size_t ni, std::size_t nj )
{
   const int i = static_cast<int>( ni );
   const int j = static_cast<int>( nj );
   if( i == 0 )
      return j + 1;
   if( j == 0 )
      return i + 2;
   return 2 * i + j + 3;
}

int
f_rmc_row_count( std::size_t ni, std::size_t nj )
{
   const int i = static_cast<int>( ni );
   const int j = static_cast<int>( nj );
   if( i == 0 )
      return j + 1;
   if( j == 0 )
      return i == 1 ? 1 : 4 * ( i - 1 );
   if( i == 1 )
      return j + 1 + 5;
   // perspective block + two lifted factors (bound and link rows) + Fortet + chain
   return 4 + 4 * 2 + j + 1 + 4 * ( i - 2 );
}

} // namespace mimf
