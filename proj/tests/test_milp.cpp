#include "enumeration.hpp"
#include "mimf/bench.hpp"
#include "mimf/solver.hpp"

#include <doctest.h>

#include <cmath>

using namespace mimf;

TEST_CASE( "binaries fixed by rows need one node" )
{
   LinearModel m;
   const VarId z1 = m.add_variable( "z1", 0, 1, VarKind::Binary );
   const VarId z2 = m.add_variable( "z2", 0, 1, VarKind::Binary );
   const VarId x = m.add_variable( "x", 0, 4 );
   LinearExpr a, b, c;
   a.add( z1, 1.0 );
   b.add( z2, 1.0 );
   c.add( x, 1.0 ).add( z1, -1.0 ).add( z2, 2.0 );
   m.add_constraint( a, RowSense::Equal, 1.0 );
   m.add_constraint( b, RowSense::Equal, 0.0 );
   m.add_constraint( c, RowSense::GreaterEqual, 0.5 );
   LinearExpr obj;
   obj.add( x, 1.0 ).add( z1, 3.0 );
   m.set_objective( obj );
   const SolveResult lp = solve_lp( m );
   const SolveResult r = solve_milp( m );
   REQUIRE( r.optimal() );
   CHECK( r.bb_nodes == 1 );
   CHECK( r.objective == doctest::Approx( lp.objective ) );
   CHECK( r.objective == doctest::Approx( 4.5 ) );
}

TEST_CASE( "three-item knapsack matches enumeration" )
{
   LinearModel m;
   const double value[] = { 10, 13, 7 };
   const double weight[] = { 4, 6, 3 };
   LinearExpr cap, obj;
   for( int j = 0; j < 3; ++j )
   {
      const VarId z = m.add_variable( "z" + std::to_string( j ), 0, 1, VarKind::Binary );
      cap.add( z, weight[j] );
      obj.add( z, value[j] );
   }
   m.add_constraint( cap, RowSense::LessEqual, 9.0 );
   m.set_objective( obj, ObjSense::Maximize );
   const SolveResult r = solve_milp( m );
   REQUIRE( r.optimal() );
   CHECK( r.objective == doctest::Approx( 20.0 ) );
   CHECK( r.objective == doctest::Approx( *testing::enumerate_binaries( m ) ) );
   CHECK( evaluate( m, r.point ).feasible() );
}

TEST_CASE( "random mixed-binary models match enumeration" )
{
   Xorshift64Star rng( 4242 );
   int solved = 0;
   for( int trial = 0; trial < 30; ++trial )
   {
      CAPTURE( trial );
      const LinearModel m = testing::random_mixed_binary( rng, 3 + trial % 6, 2, 3 );
      const auto ref = testing::enumerate_binaries( m );
      const SolveResult r = solve_milp( m );
      if( !ref )
      {
         CHECK( r.status == SolveStatus::Infeasible );
         continue;
      }
      REQUIRE( r.optimal() );
      CHECK( r.objective == doctest::Approx( *ref ).epsilon( 1e-6 ).scale( 1.0 ) );
      const Evaluation ev = evaluate( m, r.point );
      CHECK( ev.max_violation() <= 1e-7 );
      CHECK( ev.max_integrality_violation <= 1e-6 );
      ++solved;
   }
   CHECK( solved > 20 );
}

TEST_CASE( "bilinear benchmark instance matches enumeration" )
{
   const Instance inst = generate_instance( 10, 2, 3 );
   const RelaxedMilp milp = build_relaxed_milp( inst, Formulation::FLambda );
   const SolveResult r = solve_milp( milp.model );
   REQUIRE( r.optimal() );
   const auto ref = testing::enumerate_binaries( milp.model );
   REQUIRE( ref );
   CHECK( r.objective == doctest::Approx( *ref ).epsilon( 1e-6 ) );
   CHECK( r.root_bound <= r.objective + 1e-9 );
}

TEST_CASE( "node limit returns incumbent and bound" )
{
   // first generated model that needs a real search
   Xorshift64Star rng( 11 );
   LinearModel m;
   SolveResult full;
   do
   {
      m = testing::random_mixed_binary( rng, 12, 2, 3 );
      full = solve_milp( m );
   } while( !full.optimal() || full.bb_nodes <= 10 );
   const SolveResult cut = solve_milp( m, 3 );
   CHECK( cut.bb_nodes == 3 );
   CHECK( cut.status == SolveStatus::NodeLimit );
   const double sense = m.sense() == ObjSense::Maximize ? -1.0 : 1.0;
   CHECK( sense * cut.best_bound <= sense * full.objective + 1e-9 );
   if( !cut.point.empty() )
      CHECK( sense * cut.objective >= sense * full.objective - 1e-9 );
}

TEST_CASE( "gap formula" )
{
   CHECK( *lp_gap( 100.0, 97.0 ) == doctest::Approx( 3.0 ) );
   CHECK( *lp_gap( 50.0, 50.0 ) == 0.0 );
   CHECK_FALSE( lp_gap( 0.0, 1.0 ).has_value() );
   // reported objective 366 with a 3.1% gap implies a bound near 354.65
   const double lb = 366.0 * ( 1.0 - 0.031 );
   CHECK( lb == doctest::Approx( 354.65 ).epsilon( 1e-4 ) );
   CHECK( *lp_gap( 366.0, lb ) == doctest::Approx( 3.1 ) );
}
