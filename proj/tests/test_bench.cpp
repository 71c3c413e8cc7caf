#include "mimf/bench.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace mimf;

namespace {

int
count_lines( const std::string& s )
{
   return static_cast<int>( std::count( s.begin(), s.end(), '\n' ) );
}

/// Smallest objective over a grid of x for every binary vector: an upper
/// bound on the true optimum of the nonconvex problem.
double
grid_upper_bound( const Instance& inst, int points )
{
   const std::size_t n = inst.n;
   double best = kInf;
   std::vector<double> x( n ), z( n );
   std::vector<int> idx( n, 0 );
   for( std::uint64_t mask = 0; mask < ( std::uint64_t{ 1 } << n ); ++mask )
   {
      for( std::size_t i = 0; i < n; ++i )
         z[i] = ( mask >> i ) & 1;
      std::fill( idx.begin(), idx.end(), 0 );
      while( true )
      {
         for( std::size_t i = 0; i < n; ++i )
            x[i] = inst.lower[i] + ( inst.upper[i] - inst.lower[i] ) * idx[i] / ( points - 1 );
         if( demand_activity( inst, x, z ) >= inst.demand )
            best = std::min( best, instance_objective( inst, x, z ) );
         std::size_t i = 0;
         while( i < n && ++idx[i] == points )
            idx[i++] = 0;
         if( i == n )
            break;
      }
   }
   return best;
}

} // namespace

TEST_CASE( "instance shape and determinism" )
{
   const Instance a = generate_instance( 5, 4, 9 );
   CHECK( a.num_terms() == 2 );
   CHECK( a.c.size() == 5 );
   CHECK( a.demand == doctest::Approx( 3.5 ) );
   for( std::size_t i = 0; i < 5; ++i )
   {
      CHECK( a.lower[i] > 0.0 );
      CHECK( a.lower[i] < 1.0 );
      CHECK( a.upper[i] == 10.0 * a.lower[i] );
   }
   CHECK( generate_instance( 5, 4, 9 ) == a );
   CHECK_FALSE( generate_instance( 5, 4, 10 ) == a );
   CHECK( generate_instance( 4, 4, 1 ).num_terms() == 1 );
   CHECK_THROWS_AS( generate_instance( 3, 4, 1 ), BenchError );

   Instance broken = a;
   broken.upper[0] += 1.0;
   CHECK_THROWS_AS( broken.validate(), BenchError );
}

TEST_CASE( "demand row of the five-variable instance" )
{
   const Instance inst = generate_instance( 5, 4, 2 );
   // windows x0..x3 z0..z3 and x1..x4 z1..z4
   std::vector<double> x( 5 ), z( 5, 1.0 );
   for( std::size_t i = 0; i < 5; ++i )
      x[i] = 1.0 + 0.1 * static_cast<double>( i );
   const double expect = 1.0 * 1.1 * 1.2 * 1.3 + 1.1 * 1.2 * 1.3 * 1.4;
   CHECK( demand_activity( inst, x, z ) == doctest::Approx( expect ) );
   z[4] = 0.0;
   CHECK( demand_activity( inst, x, z ) == doctest::Approx( 1.0 * 1.1 * 1.2 * 1.3 ) );

   const RelaxedMilp flam = build_relaxed_milp( inst, Formulation::FLambda );
   CHECK( flam.terms.size() == 2 );
   std::size_t lambdas = 0;
   for( const auto& t : flam.terms )
      lambdas += t.lambdas.size();
   CHECK( lambdas == 32 );
   const Constraint& demand = flam.model.constraints()[flam.demand_row];
   CHECK( demand.name == "demand" );
   CHECK( demand.sense == RowSense::GreaterEqual );
   CHECK( demand.rhs == doctest::Approx( inst.demand ) );
   CHECK( demand.cols.size() == 2 );
   for( const auto& t : flam.terms )
      CHECK( demand.coefs[std::find( demand.cols.begin(), demand.cols.end(), t.phi_hat.index ) -
                          demand.cols.begin()] == 1.0 );
   CHECK( flam.model.num_binaries() == 5 );
}

TEST_CASE( "single-variable instance" )
{
   const Instance inst = generate_instance( 1, 1, 4 );
   for( Formulation f : { Formulation::FLambda, Formulation::FRmc } )
   {
      const RelaxedMilp m = build_relaxed_milp( inst, f );
      const SolveResult r = solve_milp( m.model );
      REQUIRE( r.optimal() );
      // x0 z0 >= 0.7 with z0 = 1 and x0 = max(lower, 0.7)
      const double x = std::max( inst.lower[0], inst.demand );
      if( x <= inst.upper[0] )
         CHECK( r.objective == doctest::Approx( inst.c[0] * x + inst.d[0] ) );
   }
}

TEST_CASE( "bilinear windows give equal root bounds" )
{
   for( std::uint64_t seed = 1; seed <= 3; ++seed )
   {
      const Instance inst = generate_instance( 5 + 5 * seed, 2, seed );
      const SolveResult a = solve_lp( build_relaxed_milp( inst, Formulation::FLambda ).model );
      const SolveResult b = solve_lp( build_relaxed_milp( inst, Formulation::FRmc ).model );
      REQUIRE( a.optimal() );
      REQUIRE( b.optimal() );
      CHECK( a.objective == doctest::Approx( b.objective ).epsilon( 1e-6 ).scale( 1.0 ) );
   }
}

TEST_CASE( "relaxations bound the nonconvex optimum" )
{
   struct Case {
      std::size_t n, k;
      int grid;
   };
   for( Case c : { Case{ 4, 2, 9 }, Case{ 4, 3, 9 }, Case{ 5, 3, 7 }, Case{ 6, 3, 5 } } )
      for( std::uint64_t seed = 1; seed <= 2; ++seed )
      {
         CAPTURE( c.n );
         CAPTURE( c.k );
         // lower demand so a grid point can meet it
         const Instance inst = generate_instance( c.n, c.k, seed, 0.2 );
         const double upper = grid_upper_bound( inst, c.grid );
         for( Formulation f : { Formulation::FLambda, Formulation::FRmc } )
         {
            const RelaxedMilp m = build_relaxed_milp( inst, f );
            const SolveResult lp = solve_lp( m.model );
            const SolveResult ip = solve_milp( m.model );
            REQUIRE( ip.optimal() );
            CHECK( lp.objective <= ip.objective + 1e-9 );
            if( std::isfinite( upper ) )
               CHECK( ip.objective <= upper + 1e-9 );
         }
      }
}

TEST_CASE( "experiment rows and aggregation" )
{
   ExperimentConfig cfg;
   cfg.n_values = { 20 };
   cfg.k = 4;
   const ExperimentResult res = run_experiment( cfg );
   CHECK( res.runs.size() == 10 );
   REQUIRE( res.aggregated.size() == 2 );
   for( const BenchRow& r : res.runs )
   {
      CHECK( r.status == SolveStatus::Optimal );
      CHECK( r.lp_bound <= r.milp_objective + 1e-6 );
      CHECK( r.lp_gap_percent == doctest::Approx( *lp_gap( r.milp_objective, r.lp_bound ) ) );
   }
   for( const BenchRow& a : res.aggregated )
   {
      CHECK( a.runs == 5 );
      CHECK( a.seed == 0 );
      std::vector<double> obj;
      for( const BenchRow& r : res.runs )
         if( r.formulation == a.formulation )
            obj.push_back( r.milp_objective );
      std::sort( obj.begin(), obj.end() );
      CHECK( a.milp_objective == obj[2] );
   }
   const std::string md = emit_table( res.aggregated, TableFormat::Markdown );
   CHECK( count_lines( md ) == 3 );
   CHECK( md.find( "gap (%)" ) != std::string::npos );
   CHECK( md.find( "MILP time (s)" ) != std::string::npos );
}

TEST_CASE( "table output" )
{
   BenchRow r;
   r.n = 20;
   r.k = 4;
   r.seed = 3;
   r.milp_objective = 100.0;
   r.lp_bound = 97.0;
   r.lp_gap_percent = 3.0;
   const std::string csv = emit_table( { r }, TableFormat::Csv );
   CHECK( count_lines( csv ) == 2 );
   CHECK( csv.rfind( "n,k,seed,runs,formulation,status,milp_objective,lp_bound,lp_gap_percent", 0 ) == 0 );
   CHECK( csv.find( ",3.0," ) != std::string::npos );

   BenchRow other = r;
   other.formulation = Formulation::FRmc;
   const std::string md = emit_table( { r, other }, TableFormat::Markdown );
   CHECK( count_lines( md ) == 3 );

   try
   {
      emit_table( {}, TableFormat::Csv );
      FAIL( "expected EmptyReport" );
   }
   catch( const BenchError& e )
   {
      CHECK( e.code() == BenchErrc::EmptyReport );
   }
}
