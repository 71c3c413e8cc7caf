#include "mimf/oracle.hpp"

#include "mimf/random.hpp"
#include "mimf/solver.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace mimf {

namespace {

std::string
describe( const char* what, double value )
{
   std::ostringstream os;
   os.precision( 12 );
   os << what << " (" << value << ")";
   return os.str();
}

void
check_box( std::vector<std::string>& out, std::span<const double> x,
           std::span<const Interval> bounds, double tol )
{
   for( std::size_t i = 0; i < x.size(); ++i )
   {
      const double t = tol * ( 1.0 + std::max( std::abs( bounds[i].lo ), std::abs( bounds[i].hi ) ) );
      if( x[i] < bounds[i].lo - t )
         out.push_back( describe( "x below its lower bound", x[i] - bounds[i].lo ) );
      if( x[i] > bounds[i].hi + t )
         out.push_back( describe( "x above its upper bound", x[i] - bounds[i].hi ) );
   }
}

void
check_off_binaries( std::vector<std::string>& out, std::span<const double> z, double tol )
{
   double sum = 0.0;
   for( double zj : z )
   {
      if( zj < -tol || zj > 1.0 + tol )
         out.push_back( describe( "z outside [0,1]", zj ) );
      sum += zj;
   }
   if( sum > static_cast<double>( z.size() ) - 1.0 + tol )
      out.push_back( describe( "sum of z exceeds |J| - 1", sum ) );
}

void
check_on_binaries( std::vector<std::string>& out, std::span<const double> z, double z_hat,
                   double tol )
{
   for( double zj : z )
      if( std::abs( zj - 1.0 ) > tol )
         out.push_back( describe( "z differs from 1", zj ) );
   if( std::abs( z_hat - 1.0 ) > tol )
      out.push_back( describe( "z_hat differs from 1", z_hat ) );
}

void
prefix_all( std::vector<std::string>& into, std::vector<std::string> from, const char* prefix )
{
   for( auto& s : from )
      into.push_back( prefix + s );
}

double
tol_for( double value, double tol )
{
   return tol * ( 1.0 + std::abs( value ) );
}

std::vector<double>
lift_vertex( const LinearModel& model, const MimfTerm& term, const RelaxationHandle& h,
             const GraphVertex& v )
{
   std::vector<double> point( model.num_variables(), 0.0 );
   for( std::size_t i = 0; i < term.continuous.size(); ++i )
      point[term.continuous[i].index] = v.x[i];
   double zprod = 1.0;
   for( std::size_t j = 0; j < term.binaries.size(); ++j )
   {
      point[term.binaries[j].index] = v.z[j];
      zprod *= v.z[j];
   }
   if( h.has_z_hat() )
      point[h.z_hat.index] = zprod;

   // partial products x1 * ... * x_t for the McCormick chain
   double prefix = v.x.empty() ? 1.0 : v.x[0];
   for( std::size_t t = 0; t < h.chain.size(); ++t )
   {
      prefix *= v.x[t + 1];
      point[h.chain[t].index] = prefix;
   }

   if( !h.lambdas.empty() && zprod == 1.0 )
      point[h.lambdas[v.corner].index] = 1.0;
   for( std::size_t k = 0; k < h.xz_lifted.size(); ++k )
      point[h.xz_lifted[k].index] = zprod * point[h.factors[k].index];
   point[h.phi_hat.index] = v.phi;
   return point;
}

} // namespace

std::vector<double>
GraphVertex::coordinates() const
{
   std::vector<double> c( x );
   for( int zj : z )
      c.push_back( zj );
   c.push_back( phi );
   return c;
}

std::vector<GraphVertex>
graph_vertices( const MimfTerm& term )
{
   const std::size_t ni = term.continuous.size();
   const std::size_t nj = term.binaries.size();
   if( ni + nj > 16 )
      throw RelaxationError( RelaxationErrc::TooManyVariables,
                             "graph_vertices supports |I| + |J| <= 16" );
   if( term.bounds.size() != ni )
      throw RelaxationError( RelaxationErrc::InvalidTerm,
                             "term needs one bound pair per continuous variable" );

   const std::size_t total = std::size_t{ 1 } << ( ni + nj );
   std::vector<GraphVertex> out( total );
   for( std::size_t idx = 0; idx < total; ++idx )
   {
      GraphVertex& v = out[idx];
      v.corner = idx & ( ( std::size_t{ 1 } << ni ) - 1 );
      double prod = 1.0;
      for( std::size_t i = 0; i < ni; ++i )
      {
         v.x.push_back( ( idx >> i ) & 1 ? term.bounds[i].hi : term.bounds[i].lo );
         prod *= v.x.back();
      }
      bool all_on = true;
      for( std::size_t j = 0; j < nj; ++j )
      {
         const int zj = static_cast<int>( ( idx >> ( ni + j ) ) & 1 );
         v.z.push_back( zj );
         all_on = all_on && zj == 1;
      }
      v.phi = all_on ? prod : 0.0;
   }
   return out;
}

Membership
membership_in_conv( std::span<const double> point, std::span<const std::vector<double>> vertices,
                    double tolerance )
{
   if( vertices.empty() )
      throw ModelError( ModelErrc::DimensionMismatch, "membership test needs vertices" );
   for( const auto& v : vertices )
      if( v.size() != point.size() )
         throw ModelError( ModelErrc::DimensionMismatch,
                           "vertex and point dimensions differ" );

   LinearModel lp( "membership" );
   std::vector<VarId> mu;
   mu.reserve( vertices.size() );
   for( std::size_t k = 0; k < vertices.size(); ++k )
      mu.push_back( lp.add_variable( "mu" + std::to_string( k ), 0.0, 1.0 ) );
   const VarId slack = lp.add_variable( "slack", 0.0, kInf );

   LinearExpr sum;
   for( VarId m : mu )
      sum.add( m, 1.0 );
   lp.add_constraint( sum, RowSense::Equal, 1.0, "convexity" );
   for( std::size_t c = 0; c < point.size(); ++c )
   {
      LinearExpr comb;
      for( std::size_t k = 0; k < vertices.size(); ++k )
         comb.add( mu[k], vertices[k][c] );
      lp.add_constraint( LinearExpr( comb ).add( slack, -1.0 ), RowSense::LessEqual, point[c],
                         "c" + std::to_string( c ) + "_up" );
      lp.add_constraint( LinearExpr( comb ).add( slack, 1.0 ), RowSense::GreaterEqual, point[c],
                         "c" + std::to_string( c ) + "_lo" );
   }
   lp.set_objective( LinearExpr().add( slack, 1.0 ) );

   const SolveResult r = solve_lp( lp );
   Membership m;
   m.slack = r.optimal() ? r.objective : kInf;
   m.inside = r.optimal() && m.slack <= tolerance;
   return m;
}

bool
membership_in_conv( std::span<const double> point, std::span<const GraphVertex> vertices,
                    double tolerance )
{
   std::vector<std::vector<double>> coords;
   coords.reserve( vertices.size() );
   for( const auto& v : vertices )
      coords.push_back( v.coordinates() );
   return membership_in_conv( point, coords, tolerance ).inside;
}

LambdaHullPoint
extract_lambda_point( const MimfTerm& term, const RelaxationHandle& h,
                      std::span<const double> point )
{
   LambdaHullPoint p;
   for( VarId x : term.continuous )
      p.x.push_back( point[x.index] );
   for( VarId z : term.binaries )
      p.z.push_back( point[z.index] );
   for( VarId l : h.lambdas )
      p.lambda.push_back( point[l.index] );
   p.phi = point[h.phi_hat.index];
   p.z_hat = h.has_z_hat() ? point[h.z_hat.index] : 1.0;
   return p;
}

RmcHullPoint
extract_rmc_point( const MimfTerm& term, const RelaxationHandle& h, std::span<const double> point )
{
   RmcHullPoint p;
   for( VarId x : h.factors )
      p.x.push_back( point[x.index] );
   for( VarId xz : h.xz_lifted )
      p.xz.push_back( point[xz.index] );
   for( VarId z : term.binaries )
      p.z.push_back( point[z.index] );
   p.phi = point[h.phi_hat.index];
   p.z_hat = h.has_z_hat() ? point[h.z_hat.index] : 1.0;
   return p;
}

std::vector<std::string>
check_lambda_off( const LambdaHullPoint& p, std::span<const Interval> bounds, double tol )
{
   std::vector<std::string> out;
   check_box( out, p.x, bounds, tol );
   if( std::abs( p.phi ) > tol )
      out.push_back( describe( "phi nonzero", p.phi ) );
   for( double l : p.lambda )
      if( std::abs( l ) > tol )
         out.push_back( describe( "lambda nonzero", l ) );
   if( std::abs( p.z_hat ) > tol )
      out.push_back( describe( "z_hat nonzero", p.z_hat ) );
   check_off_binaries( out, p.z, tol );
   return out;
}

std::vector<std::string>
check_lambda_on( const LambdaHullPoint& p, std::span<const Interval> bounds, double tol )
{
   std::vector<std::string> out;
   check_box( out, p.x, bounds, tol );
   const auto corners = enumerate_extreme_points( bounds );
   if( corners.size() != p.lambda.size() )
   {
      out.push_back( "lambda has the wrong length" );
      return out;
   }
   double sum = 0.0;
   double phi = 0.0;
   std::vector<double> x( p.x.size(), 0.0 );
   for( std::size_t k = 0; k < corners.size(); ++k )
   {
      const double l = p.lambda[k];
      if( l < -tol || l > 1.0 + tol )
         out.push_back( describe( "lambda outside [0,1]", l ) );
      sum += l;
      phi += l * corners[k].product_value;
      for( std::size_t i = 0; i < x.size(); ++i )
         x[i] += l * corners[k].coordinates[i];
   }
   if( std::abs( sum - 1.0 ) > tol )
      out.push_back( describe( "lambda does not sum to 1", sum ) );
   for( std::size_t i = 0; i < x.size(); ++i )
      if( std::abs( x[i] - p.x[i] ) > tol_for( x[i], tol ) )
         out.push_back( describe( "x differs from its corner combination", p.x[i] - x[i] ) );
   if( std::abs( phi - p.phi ) > tol_for( phi, tol ) )
      out.push_back( describe( "phi differs from the corner-product combination", p.phi - phi ) );
   check_on_binaries( out, p.z, p.z_hat, tol );
   return out;
}

std::vector<std::string>
check_rmc_off( const RmcHullPoint& p, std::span<const Interval> bounds, double tol )
{
   std::vector<std::string> out;
   check_box( out, p.x, bounds, tol );
   if( std::abs( p.phi ) > tol )
      out.push_back( describe( "phi nonzero", p.phi ) );
   for( double v : p.xz )
      if( std::abs( v ) > tol )
         out.push_back( describe( "xz nonzero", v ) );
   if( std::abs( p.z_hat ) > tol )
      out.push_back( describe( "z_hat nonzero", p.z_hat ) );
   check_off_binaries( out, p.z, tol );
   return out;
}

std::vector<std::string>
check_rmc_on( const RmcHullPoint& p, std::span<const Interval> bounds, double tol )
{
   std::vector<std::string> out;
   check_box( out, p.x, bounds, tol );
   if( p.x.size() == 1 && p.xz.size() == 1 && bounds.size() == 1 )
   {
      // single-factor fallback: phi = xz = x
      if( std::abs( p.phi - p.x[0] ) > tol_for( p.x[0], tol ) )
         out.push_back( describe( "phi differs from x", p.phi - p.x[0] ) );
      if( std::abs( p.xz[0] - p.x[0] ) > tol_for( p.x[0], tol ) )
         out.push_back( describe( "xz differs from x", p.xz[0] - p.x[0] ) );
      check_on_binaries( out, p.z, p.z_hat, tol );
      return out;
   }
   if( p.x.size() != 2 || p.xz.size() != 2 || bounds.size() != 2 )
   {
      out.push_back( "frmc points carry one or two factors" );
      return out;
   }
   const double x1 = p.x[0], x2 = p.x[1];
   const Interval b1 = bounds[0], b2 = bounds[1];
   const double t = tol_for( std::max( std::abs( b1.hi * b2.hi ), std::abs( b1.lo * b2.lo ) ), tol );
   if( p.phi < b2.hi * x1 + b1.hi * x2 - b1.hi * b2.hi - t )
      out.push_back( describe( "phi below the upper-upper envelope", p.phi ) );
   if( p.phi < b2.lo * x1 + b1.lo * x2 - b1.lo * b2.lo - t )
      out.push_back( describe( "phi below the lower-lower envelope", p.phi ) );
   if( p.phi > b2.hi * x1 + b1.lo * x2 - b1.lo * b2.hi + t )
      out.push_back( describe( "phi above the lower-upper envelope", p.phi ) );
   if( p.phi > b2.lo * x1 + b1.hi * x2 - b1.hi * b2.lo + t )
      out.push_back( describe( "phi above the upper-lower envelope", p.phi ) );
   for( std::size_t k = 0; k < 2; ++k )
      if( std::abs( p.xz[k] - p.x[k] ) > tol_for( p.x[k], tol ) )
         out.push_back( describe( "xz differs from x", p.xz[k] - p.x[k] ) );
   check_on_binaries( out, p.z, p.z_hat, tol );
   return out;
}

Decomposition<LambdaHullPoint>
decompose_lambda_point( const LambdaHullPoint& point, std::span<const Interval> bounds, double tol )
{
   Decomposition<LambdaHullPoint> d;
   const double w = point.z_hat;
   d.weight = w;
   if( w <= 1e-9 )
   {
      d.disjunct = Disjunct::Off;
      d.p0 = point;
      prefix_all( d.violations, check_lambda_off( point, bounds, tol ), "p0: " );
      return d;
   }
   if( w >= 1.0 - 1e-9 )
   {
      d.disjunct = Disjunct::On;
      d.p1 = point;
      prefix_all( d.violations, check_lambda_on( point, bounds, tol ), "p1: " );
      return d;
   }

   const auto corners = enumerate_extreme_points( bounds );
   std::vector<double> combo( point.x.size(), 0.0 );
   for( std::size_t k = 0; k < corners.size() && k < point.lambda.size(); ++k )
      for( std::size_t i = 0; i < combo.size(); ++i )
         combo[i] += point.lambda[k] * corners[k].coordinates[i];

   LambdaHullPoint p0, p1;
   for( std::size_t i = 0; i < combo.size(); ++i )
   {
      p0.x.push_back( ( point.x[i] - combo[i] ) / ( 1.0 - w ) );
      p1.x.push_back( combo[i] / w );
   }
   p0.phi = 0.0;
   p1.phi = point.phi / w;
   p0.lambda.assign( point.lambda.size(), 0.0 );
   for( double l : point.lambda )
      p1.lambda.push_back( l / w );
   for( double zj : point.z )
      p0.z.push_back( ( zj - w ) / ( 1.0 - w ) );
   p1.z.assign( point.z.size(), 1.0 );
   p0.z_hat = 0.0;
   p1.z_hat = 1.0;

   // recombination residual over every coordinate
   const auto mix = [w]( double a, double b ) { return ( 1.0 - w ) * a + w * b; };
   double res = std::abs( mix( p0.phi, p1.phi ) - point.phi );
   res = std::max( res, std::abs( mix( p0.z_hat, p1.z_hat ) - point.z_hat ) );
   for( std::size_t i = 0; i < point.x.size(); ++i )
      res = std::max( res, std::abs( mix( p0.x[i], p1.x[i] ) - point.x[i] ) );
   for( std::size_t k = 0; k < point.lambda.size(); ++k )
      res = std::max( res, std::abs( mix( p0.lambda[k], p1.lambda[k] ) - point.lambda[k] ) );
   for( std::size_t j = 0; j < point.z.size(); ++j )
      res = std::max( res, std::abs( mix( p0.z[j], p1.z[j] ) - point.z[j] ) );
   d.residual = res;

   prefix_all( d.violations, check_lambda_off( p0, bounds, tol / ( 1.0 - w ) ), "p0: " );
   prefix_all( d.violations, check_lambda_on( p1, bounds, tol / w ), "p1: " );
   d.p0 = std::move( p0 );
   d.p1 = std::move( p1 );
   return d;
}

Decomposition<RmcHullPoint>
decompose_rmc_point( const RmcHullPoint& point, std::span<const Interval> bounds, double tol )
{
   Decomposition<RmcHullPoint> d;
   const double w = point.z_hat;
   d.weight = w;
   if( w <= 1e-9 )
   {
      d.disjunct = Disjunct::Off;
      d.p0 = point;
      prefix_all( d.violations, check_rmc_off( point, bounds, tol ), "q0: " );
      return d;
   }
   if( w >= 1.0 - 1e-9 )
   {
      d.disjunct = Disjunct::On;
      d.p1 = point;
      prefix_all( d.violations, check_rmc_on( point, bounds, tol ), "q1: " );
      return d;
   }

   RmcHullPoint q0, q1;
   for( std::size_t k = 0; k < point.x.size(); ++k )
   {
      q0.x.push_back( ( point.x[k] - point.xz[k] ) / ( 1.0 - w ) );
      q1.x.push_back( point.xz[k] / w );
   }
   q0.xz.assign( point.xz.size(), 0.0 );
   q1.xz = q1.x;
   q0.phi = 0.0;
   q1.phi = point.phi / w;
   for( double zj : point.z )
      q0.z.push_back( ( zj - w ) / ( 1.0 - w ) );
   q1.z.assign( point.z.size(), 1.0 );
   q0.z_hat = 0.0;
   q1.z_hat = 1.0;

   const auto mix = [w]( double a, double b ) { return ( 1.0 - w ) * a + w * b; };
   double res = std::abs( mix( q0.phi, q1.phi ) - point.phi );
   res = std::max( res, std::abs( mix( q0.z_hat, q1.z_hat ) - point.z_hat ) );
   for( std::size_t k = 0; k < point.x.size(); ++k )
   {
      res = std::max( res, std::abs( mix( q0.x[k], q1.x[k] ) - point.x[k] ) );
      res = std::max( res, std::abs( mix( q0.xz[k], q1.xz[k] ) - point.xz[k] ) );
   }
   for( std::size_t j = 0; j < point.z.size(); ++j )
      res = std::max( res, std::abs( mix( q0.z[j], q1.z[j] ) - point.z[j] ) );
   d.residual = res;

   prefix_all( d.violations, check_rmc_off( q0, bounds, tol / ( 1.0 - w ) ), "q0: " );
   prefix_all( d.violations, check_rmc_on( q1, bounds, tol / w ), "q1: " );
   d.p0 = std::move( q0 );
   d.p1 = std::move( q1 );
   return d;
}

PhiRange
phi_range( const LinearModel& model, VarId phi, std::span<const std::pair<VarId, double>> fixed )
{
   LinearModel work = model;
   for( auto [var, value] : fixed )
      work.set_bounds( var, value, value );

   PhiRange range;
   work.set_objective( LinearExpr().add( phi, 1.0 ), ObjSense::Minimize );
   const SolveResult lo = solve_lp( work );
   if( !lo.optimal() )
      return range;
   work.set_objective( LinearExpr().add( phi, 1.0 ), ObjSense::Maximize );
   const SolveResult hi = solve_lp( work );
   if( !hi.optimal() )
      return range;
   range.feasible = true;
   range.min = lo.objective;
   range.max = hi.objective;
   return range;
}

std::vector<Interval>
sample_term_bounds( std::size_t num_continuous, std::uint64_t seed )
{
   Xorshift64Star rng( seed );
   std::vector<Interval> bounds;
   for( std::size_t i = 0; i < num_continuous; ++i )
   {
      const double lo = 2.0 * rng.uniform_open() - 1.0;
      const double width = 2.0 * rng.uniform_open();
      bounds.push_back( { lo, lo + width } );
   }
   return bounds;
}

ConjectureReport
check_projection_conjecture( std::span<const Interval> bounds, std::size_t num_binaries,
                             const ConjectureOptions& options )
{
   const auto start = std::chrono::steady_clock::now();
   const std::size_t ni = bounds.size();
   if( ni + num_binaries > 10 )
      throw RelaxationError( RelaxationErrc::TooManyVariables,
                             "projection check supports |I| + |J| <= 10" );

   LinearModel model( "hull_probe" );
   MimfTerm term;
   for( std::size_t i = 0; i < ni; ++i )
   {
      term.continuous.push_back(
          model.add_variable( "x" + std::to_string( i ), bounds[i].lo, bounds[i].hi ) );
      term.bounds.push_back( bounds[i] );
   }
   for( std::size_t j = 0; j < num_binaries; ++j )
      term.binaries.push_back(
          model.add_variable( "z" + std::to_string( j ), 0.0, 1.0, VarKind::Binary ) );
   const RelaxationHandle h = build_relaxation( model, term, options.formulation );

   ConjectureReport report;
   report.num_continuous = ni;
   report.num_binaries = num_binaries;
   report.bounds.assign( bounds.begin(), bounds.end() );
   report.formulation = options.formulation;

   const auto vertices = graph_vertices( term );
   std::vector<std::vector<double>> coords;
   for( const auto& v : vertices )
      coords.push_back( v.coordinates() );

   std::vector<VarId> projected( term.continuous );
   projected.insert( projected.end(), term.binaries.begin(), term.binaries.end() );
   projected.push_back( h.phi_hat );

   Xorshift64Star rng( options.seed );
   for( std::size_t k = 0; k < options.directions; ++k )
   {
      const std::vector<double> dir = rng.unit_vector( projected.size() );
      LinearExpr obj;
      for( std::size_t c = 0; c < projected.size(); ++c )
         obj.add( projected[c], dir[c] );
      model.set_objective( obj, ObjSense::Maximize );
      const SolveResult r = solve_lp( model );
      ++report.directions_tested;
      if( !r.optimal() )
      {
         report.counterexamples.push_back( { dir, {}, kInf } );
         continue;
      }
      std::vector<double> p;
      for( VarId v : projected )
         p.push_back( r.point[v.index] );
      const Membership m = membership_in_conv( p, coords, options.tolerance );
      report.max_residual = std::max( report.max_residual, m.slack );
      if( !m.inside )
         report.counterexamples.push_back( { dir, std::move( p ), m.slack } );
   }

   report.vertices_total = vertices.size();
   for( const auto& v : vertices )
   {
      const auto point = lift_vertex( model, term, h, v );
      const Evaluation e = evaluate( model, point, 0.0 );
      report.max_lift_violation = std::max( report.max_lift_violation, e.max_violation() );
      if( e.max_violation() <= options.tolerance )
         ++report.vertices_lifted;
   }

   report.seconds =
       std::chrono::duration<double>( std::chrono::steady_clock::now() - start ).count();
   return report;
}

} // namespace mimf
