#include "mimf/oracle.hpp"
#include "mimf/random.hpp"
#include "mimf/relaxations.hpp"
#include "mimf/solver.hpp"

#include <doctest.h>

#include <cmath>

using namespace mimf;

namespace {

struct Term {
   LinearModel model;
   MimfTerm term;
};

Term
make_term( std::vector<Interval> bounds, std::size_t nj )
{
   Term t;
   for( std::size_t i = 0; i < bounds.size(); ++i )
      t.term.continuous.push_back(
          t.model.add_variable( "x" + std::to_string( i ), bounds[i].lo, bounds[i].hi ) );
   for( std::size_t j = 0; j < nj; ++j )
      t.term.binaries.push_back(
          t.model.add_variable( "z" + std::to_string( j ), 0, 1, VarKind::Binary ) );
   t.term.bounds = std::move( bounds );
   return t;
}

std::vector<std::pair<VarId, double>>
fix( std::span<const VarId> cols, std::span<const double> values )
{
   std::vector<std::pair<VarId, double>> out;
   for( std::size_t i = 0; i < cols.size(); ++i )
      out.emplace_back( cols[i], values[i] );
   return out;
}

/// Range of phi over the hull of the graph's vertices with (x, z) pinned.
PhiRange
hull_phi_range( const MimfTerm& term, std::span<const double> x, std::span<const double> z )
{
   const auto verts = graph_vertices( term );
   LinearModel m;
   LinearExpr sum, phi;
   std::vector<LinearExpr> xs( x.size() ), zs( z.size() );
   for( std::size_t v = 0; v < verts.size(); ++v )
   {
      const VarId mu = m.add_variable( "mu" + std::to_string( v ), 0, 1 );
      sum.add( mu, 1.0 );
      phi.add( mu, verts[v].phi );
      for( std::size_t i = 0; i < x.size(); ++i )
         xs[i].add( mu, verts[v].x[i] );
      for( std::size_t j = 0; j < z.size(); ++j )
         zs[j].add( mu, verts[v].z[j] );
   }
   m.add_constraint( sum, RowSense::Equal, 1.0 );
   for( std::size_t i = 0; i < x.size(); ++i )
      m.add_constraint( xs[i], RowSense::Equal, x[i] );
   for( std::size_t j = 0; j < z.size(); ++j )
      m.add_constraint( zs[j], RowSense::Equal, z[j] );
   PhiRange r;
   m.set_objective( phi, ObjSense::Minimize );
   const SolveResult lo = solve_lp( m );
   m.set_objective( phi, ObjSense::Maximize );
   const SolveResult hi = solve_lp( m );
   r.feasible = lo.optimal() && hi.optimal();
   r.min = lo.objective;
   r.max = hi.objective;
   return r;
}

} // namespace

TEST_CASE( "bilinear envelope ranges" )
{
   {
      Term t = make_term( { { 1, 2 }, { 1, 2 } }, 0 );
      const RelaxationHandle h = mccormick_bilinear( t.model, t.term.continuous[0],
                                                     t.term.continuous[1], { 1, 2 }, { 1, 2 } );
      CHECK( h.rows_added == 4 );
      const double at[] = { 1.5, 1.5 };
      const PhiRange r = phi_range( t.model, h.phi_hat, fix( t.term.continuous, at ) );
      REQUIRE( r.feasible );
      CHECK( r.min == doctest::Approx( 2.0 ) );
      CHECK( r.max == doctest::Approx( 2.5 ) );
      // analytic: max of under-estimators, min of over-estimators
      const double lo = std::max( 1 * 1.5 + 1.5 * 1 - 1, 2 * 1.5 + 1.5 * 2 - 4 );
      const double hi = std::min( 2 * 1.5 + 1.5 * 1 - 2, 1 * 1.5 + 1.5 * 2 - 2 );
      CHECK( r.min == doctest::Approx( lo ) );
      CHECK( r.max == doctest::Approx( hi ) );
   }
   {
      Term t = make_term( { { -1, 1 }, { -1, 1 } }, 0 );
      const RelaxationHandle h = mccormick_bilinear( t.model, t.term.continuous[0],
                                                     t.term.continuous[1], { -1, 1 }, { -1, 1 } );
      const double at[] = { 0.0, 0.0 };
      const PhiRange r = phi_range( t.model, h.phi_hat, fix( t.term.continuous, at ) );
      CHECK( r.min == doctest::Approx( -1.0 ) );
      CHECK( r.max == doctest::Approx( 1.0 ) );
   }
   {
      Term t = make_term( { { 0, 1 }, { 0, 1 } }, 0 );
      const RelaxationHandle h = mccormick_bilinear( t.model, t.term.continuous[0],
                                                     t.term.continuous[1], { 0, 1 }, { 0, 1 } );
      const double at[] = { 1.0, 1.0 };
      const PhiRange r = phi_range( t.model, h.phi_hat, fix( t.term.continuous, at ) );
      CHECK( r.min == doctest::Approx( 1.0 ) );
      CHECK( r.max == doctest::Approx( 1.0 ) );
   }
}

TEST_CASE( "binary product linearization is exact on all binary points" )
{
   for( std::size_t nj = 1; nj <= 3; ++nj )
   {
      Term t = make_term( {}, nj );
      const RelaxationHandle h = fortet_binary_product( t.model, t.term.binaries );
      CHECK( h.rows_added == static_cast<int>( nj ) + 1 );
      for( unsigned mask = 0; mask < ( 1u << nj ); ++mask )
      {
         std::vector<double> z;
         double prod = 1.0;
         for( std::size_t j = 0; j < nj; ++j )
         {
            z.push_back( ( mask >> j ) & 1 );
            prod *= z.back();
         }
         const PhiRange r = phi_range( t.model, h.z_hat, fix( t.term.binaries, z ) );
         REQUIRE( r.feasible );
         CHECK( r.min == doctest::Approx( prod ) );
         CHECK( r.max == doctest::Approx( prod ) );
      }
   }
}

TEST_CASE( "box corners in counting order" )
{
   const Interval one[] = { { 1, 2 } };
   auto p = enumerate_extreme_points( one );
   REQUIRE( p.size() == 2 );
   CHECK( p[0].coordinates == std::vector<double>{ 1 } );
   CHECK( p[1].product_value == 2 );

   const Interval two[] = { { 1, 2 }, { 3, 4 } };
   p = enumerate_extreme_points( two );
   REQUIRE( p.size() == 4 );
   CHECK( p[0].coordinates == std::vector<double>{ 1, 3 } );
   CHECK( p[1].coordinates == std::vector<double>{ 2, 3 } );
   CHECK( p[2].coordinates == std::vector<double>{ 1, 4 } );
   CHECK( p[3].coordinates == std::vector<double>{ 2, 4 } );
   CHECK( p[0].product_value == 3 );
   CHECK( p[1].product_value == 6 );
   CHECK( p[2].product_value == 4 );
   CHECK( p[3].product_value == 8 );

   const Interval degenerate[] = { { 5, 5 }, { 0, 1 } };
   p = enumerate_extreme_points( degenerate );
   REQUIRE( p.size() == 4 );
   CHECK( p[0].product_value == 0 );
   CHECK( p[1].product_value == 0 );
   CHECK( p[2].product_value == 5 );
   CHECK( p[3].product_value == 5 );

   CHECK_THROWS_AS( enumerate_extreme_points( std::span<const Interval>{} ), RelaxationError );
   const Interval open[] = { { 0, kInf } };
   CHECK_THROWS_AS( enumerate_extreme_points( open ), RelaxationError );
}

TEST_CASE( "interval product bounds" )
{
   const Interval a[] = { { 1, 2 }, { 3, 4 } };
   CHECK( interval_product_bounds( a ) == Interval{ 3, 8 } );
   const Interval b[] = { { -1, 2 }, { -3, 4 } };
   CHECK( interval_product_bounds( b ) == Interval{ -6, 8 } );
   const Interval c[] = { { 0, 0 }, { 5, 9 } };
   const Interval r = interval_product_bounds( c );
   CHECK( r.lo == 0.0 );
   CHECK( r.hi == 0.0 );
}

TEST_CASE( "extreme-point formulation of continuous products" )
{
   {
      Term t = make_term( { { 0.5, 3 } }, 0 );
      const RelaxationHandle h = lambda_formulation( t.model, t.term );
      CHECK( h.rows_added == 3 );
      for( double x : { 0.5, 1.2, 3.0 } )
      {
         const double at[] = { x };
         const PhiRange r = phi_range( t.model, h.phi_hat, fix( t.term.continuous, at ) );
         CHECK( r.min == doctest::Approx( x ) );
         CHECK( r.max == doctest::Approx( x ) );
      }
   }
   {
      Term t = make_term( { { 1, 2 }, { 1, 2 } }, 0 );
      const RelaxationHandle h = lambda_formulation( t.model, t.term );
      CHECK( h.lambdas.size() == 4 );
      const double at[] = { 1.5, 1.5 };
      const PhiRange r = phi_range( t.model, h.phi_hat, fix( t.term.continuous, at ) );
      CHECK( r.min == doctest::Approx( 2.0 ) );
      CHECK( r.max == doctest::Approx( 2.5 ) );
   }
   {
      Term t = make_term( { { 0, 1 }, { 0, 1 }, { 0, 1 } }, 0 );
      const RelaxationHandle h = lambda_formulation( t.model, t.term );
      CHECK( h.lambdas.size() == 8 );
      const double at[] = { 1, 1, 1 };
      const PhiRange r = phi_range( t.model, h.phi_hat, fix( t.term.continuous, at ) );
      CHECK( r.min == doctest::Approx( 1.0 ) );
      CHECK( r.max == doctest::Approx( 1.0 ) );
   }
   Term bad = make_term( { { 0, 1 } }, 1 );
   CHECK_THROWS_AS( lambda_formulation( bad.model, bad.term ), RelaxationError );
}

TEST_CASE( "extreme-point disjunctive formulation" )
{
   SUBCASE( "off state zeroes the weights" )
   {
      Term t = make_term( { { 1, 2 }, { 1, 2 } }, 1 );
      const RelaxationHandle h = build_f_lambda( t.model, t.term );
      const std::pair<VarId, double> off[] = { { h.z_hat, 0.0 } };
      for( VarId l : h.lambdas )
      {
         const PhiRange r = phi_range( t.model, l, off );
         CHECK( r.max == doctest::Approx( 0.0 ).scale( 1.0 ) );
      }
      const PhiRange r = phi_range( t.model, h.phi_hat, off );
      CHECK( r.min == doctest::Approx( 0.0 ).scale( 1.0 ) );
      CHECK( r.max == doctest::Approx( 0.0 ).scale( 1.0 ) );
      for( VarId x : t.term.continuous )
      {
         const PhiRange rx = phi_range( t.model, x, off );
         CHECK( rx.min == doctest::Approx( 1.0 ) );
         CHECK( rx.max == doctest::Approx( 2.0 ) );
      }
   }
   SUBCASE( "on state reduces to the extreme-point hull" )
   {
      Term t = make_term( { { 1, 2 }, { 1, 2 } }, 1 );
      const RelaxationHandle h = build_f_lambda( t.model, t.term );
      const std::pair<VarId, double> on[] = { { t.term.binaries[0], 1.0 },
                                              { t.term.continuous[0], 1.5 },
                                              { t.term.continuous[1], 1.5 } };
      const PhiRange r = phi_range( t.model, h.phi_hat, on );
      CHECK( r.min == doctest::Approx( 2.0 ) );
      CHECK( r.max == doctest::Approx( 2.5 ) );
   }
   SUBCASE( "half-on point matches the graph hull" )
   {
      Term t = make_term( { { 1, 2 }, { 1, 2 } }, 1 );
      const RelaxationHandle h = build_f_lambda( t.model, t.term );
      const std::pair<VarId, double> pin[] = { { t.term.continuous[0], 1.5 },
                                               { t.term.continuous[1], 1.5 },
                                               { t.term.binaries[0], 0.5 },
                                               { h.z_hat, 0.5 } };
      const PhiRange r = phi_range( t.model, h.phi_hat, pin );
      REQUIRE( r.feasible );
      // half of the on-member's product, whose corners range over [1, 4]
      CHECK( r.min == doctest::Approx( 0.5 ) );
      CHECK( r.max == doctest::Approx( 2.0 ) );
      const double x[] = { 1.5, 1.5 };
      const double z[] = { 0.5 };
      const PhiRange hull = hull_phi_range( t.term, x, z );
      CHECK( r.min == doctest::Approx( hull.min ) );
      CHECK( r.max == doctest::Approx( hull.max ) );

      // the uniform weight vector is feasible with phi = (1+2+2+4)/4 * 0.5
      std::vector<double> point( t.model.num_variables(), 0.0 );
      point[t.term.continuous[0].index] = 1.5;
      point[t.term.continuous[1].index] = 1.5;
      point[t.term.binaries[0].index] = 0.5;
      point[h.z_hat.index] = 0.5;
      for( VarId l : h.lambdas )
         point[l.index] = 0.125;
      point[h.phi_hat.index] = 1.125;
      CHECK( evaluate( t.model, point ).max_violation() <= 1e-9 );
   }
}

TEST_CASE( "recursive chain sizes" )
{
   {
      Term t = make_term( { { 1, 2 }, { 1, 2 } }, 0 );
      const std::size_t rows = t.model.num_constraints();
      const ChainResult c = recursive_mccormick_chain( t.model, t.term.continuous, t.term.bounds );
      CHECK( c.lifted == t.term.continuous[0] );
      CHECK( c.rows_added == 0 );
      CHECK( t.model.num_constraints() == rows );
   }
   {
      Term t = make_term( { { 1, 2 }, { 1, 2 }, { 1, 2 } }, 0 );
      const ChainResult c = recursive_mccormick_chain( t.model, t.term.continuous, t.term.bounds );
      CHECK( c.intermediates.size() == 1 );
      CHECK( c.rows_added == 4 );
      CHECK( c.bounds == Interval{ 1, 4 } );
   }
   {
      Term t = make_term( { { 1, 2 }, { 1, 2 }, { 1, 2 }, { 1, 2 } }, 0 );
      const ChainResult c = recursive_mccormick_chain( t.model, t.term.continuous, t.term.bounds );
      CHECK( c.intermediates.size() == 2 );
      CHECK( c.rows_added == 8 );
   }
}

TEST_CASE( "recursive disjunctive formulation" )
{
   SUBCASE( "off state" )
   {
      Term t = make_term( { { 1, 2 }, { 1, 2 } }, 2 );
      const RelaxationHandle h = build_f_rmc( t.model, t.term );
      const std::pair<VarId, double> off[] = { { h.z_hat, 0.0 } };
      for( VarId v : h.xz_lifted )
      {
         const PhiRange r = phi_range( t.model, v, off );
         CHECK( r.min == doctest::Approx( 0.0 ).scale( 1.0 ) );
         CHECK( r.max == doctest::Approx( 0.0 ).scale( 1.0 ) );
      }
      const PhiRange r = phi_range( t.model, h.phi_hat, off );
      CHECK( r.max == doctest::Approx( 0.0 ).scale( 1.0 ) );
   }
   SUBCASE( "on state gives the plain envelope" )
   {
      Term t = make_term( { { 1, 2 }, { 1, 2 } }, 2 );
      const RelaxationHandle h = build_f_rmc( t.model, t.term );
      std::vector<std::pair<VarId, double>> on{ { t.term.binaries[0], 1.0 },
                                                { t.term.binaries[1], 1.0 },
                                                { t.term.continuous[0], 1.5 },
                                                { t.term.continuous[1], 1.5 } };
      for( VarId v : h.xz_lifted )
      {
         const PhiRange r = phi_range( t.model, v, on );
         CHECK( r.min == doctest::Approx( 1.5 ) );
         CHECK( r.max == doctest::Approx( 1.5 ) );
      }
      const PhiRange r = phi_range( t.model, h.phi_hat, on );
      CHECK( r.min == doctest::Approx( 2.0 ) );
      CHECK( r.max == doctest::Approx( 2.5 ) );
   }
   SUBCASE( "half-on perspective point" )
   {
      Term t = make_term( { { 1, 2 }, { 1, 2 } }, 2 );
      const RelaxationHandle h = build_f_rmc( t.model, t.term );
      REQUIRE( h.xz_lifted.size() == 2 );
      const std::pair<VarId, double> pin[] = { { t.term.continuous[0], 1.5 },
                                               { t.term.continuous[1], 1.5 },
                                               { h.z_hat, 0.5 },
                                               { h.xz_lifted[0], 0.75 },
                                               { h.xz_lifted[1], 0.75 } };
      const PhiRange r = phi_range( t.model, h.phi_hat, pin );
      REQUIRE( r.feasible );
      // half of the envelope range at (1.5, 1.5)
      CHECK( r.min == doctest::Approx( 1.0 ) );
      CHECK( r.max == doctest::Approx( 1.25 ) );
   }
}

TEST_CASE( "graph points satisfy both formulations" )
{
   Xorshift64Star rng( 5 );
   for( Formulation f : { Formulation::FLambda, Formulation::FRmc } )
      for( std::size_t ni = 1; ni <= 3; ++ni )
         for( std::size_t nj = 1; nj <= 2; ++nj )
         {
            CAPTURE( ni );
            CAPTURE( nj );
            const auto bounds = sample_term_bounds( ni, 17 * ni + nj );
            Term t = make_term( bounds, nj );
            const RelaxationHandle h = build_relaxation( t.model, t.term, f );
            for( int trial = 0; trial < 10; ++trial )
            {
               std::vector<std::pair<VarId, double>> pin;
               double prod = 1.0;
               for( std::size_t i = 0; i < ni; ++i )
               {
                  const double x =
                      bounds[i].lo + ( bounds[i].hi - bounds[i].lo ) * rng.uniform_open();
                  pin.emplace_back( t.term.continuous[i], x );
                  prod *= x;
               }
               for( std::size_t j = 0; j < nj; ++j )
               {
                  const double z = rng.uniform_open() < 0.7 ? 1.0 : 0.0;
                  pin.emplace_back( t.term.binaries[j], z );
                  prod *= z;
               }
               const PhiRange r = phi_range( t.model, h.phi_hat, pin );
               REQUIRE( r.feasible );
               CHECK( r.min <= prod + 1e-9 );
               CHECK( r.max >= prod - 1e-9 );
            }
         }
}

TEST_CASE( "row counts match the builders" )
{
   for( Formulation f : { Formulation::FLambda, Formulation::FRmc } )
      for( std::size_t ni = 1; ni <= 4; ++ni )
         for( std::size_t nj = 0; nj <= 3; ++nj )
         {
            CAPTURE( ni );
            CAPTURE( nj );
            Term t = make_term( std::vector<Interval>( ni, Interval{ 1, 2 } ), nj );
            const std::size_t before = t.model.num_constraints();
            const RelaxationHandle h = build_relaxation( t.model, t.term, f );
            CHECK( static_cast<std::size_t>( h.rows_added ) == t.model.num_constraints() - before );
            const int expected = f == Formulation::FLambda ? f_lambda_row_count( ni, nj )
                                                            : f_rmc_row_count( ni, nj );
            CHECK( h.rows_added == expected );
            if( f == Formulation::FLambda && nj > 0 )
               CHECK( h.rows_added == static_cast<int>( 2 * ni + nj + 3 ) );
            if( f == Formulation::FLambda )
               CHECK( h.lambdas.size() == ( std::size_t{ 1 } << ni ) );
         }
}

TEST_CASE( "shared binary linearization" )
{
   Term t = make_term( { { 1, 2 }, { 1, 2 } }, 2 );
   ZHatPool pool;
   BuildOptions a, b;
   a.prefix = "a";
   a.shared_z_hat = &pool;
   b.prefix = "b";
   b.shared_z_hat = &pool;
   const RelaxationHandle h1 = build_f_lambda( t.model, t.term, a );
   const RelaxationHandle h2 = build_f_lambda( t.model, t.term, b );
   CHECK( h1.z_hat == h2.z_hat );
   CHECK( h2.rows_added == h1.rows_added - 3 );
}

TEST_CASE( "invalid terms" )
{
   Term t = make_term( { { 1, 2 } }, 1 );
   MimfTerm dup = t.term;
   dup.continuous.push_back( dup.continuous[0] );
   dup.bounds.push_back( { 1, 2 } );
   CHECK_THROWS_AS( build_f_lambda( t.model, dup ), RelaxationError );
   MimfTerm swapped = t.term;
   std::swap( swapped.continuous, swapped.binaries );
   CHECK_THROWS_AS( build_f_lambda( t.model, swapped ), RelaxationError );
   MimfTerm reversed = t.term;
   reversed.bounds[0] = { 2, 1 };
   CHECK_THROWS_AS( build_f_lambda( t.model, reversed ), RelaxationError );
}
