#pragma once

// Reference MILP optimum: fix every binary pattern and solve the LP.

#include "mimf/random.hpp"
#include "mimf/solver.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace testing {

inline std::optional<double>
enumerate_binaries( const mimf::LinearModel& model )
{
   using namespace mimf;
   std::vector<VarId> bins;
   for( const Variable& v : model.variables() )
      if( v.kind == VarKind::Binary )
         bins.push_back( v.id );
   const double sense = model.sense() == ObjSense::Maximize ? -1.0 : 1.0;
   std::optional<double> best;
   LinearModel fixed = model;
   for( std::uint64_t mask = 0; mask < ( std::uint64_t{ 1 } << bins.size() ); ++mask )
   {
      bool skip = false;
      for( std::size_t b = 0; b < bins.size(); ++b )
      {
         const double v = ( mask >> b ) & 1 ? 1.0 : 0.0;
         const Variable& orig = model.variable( bins[b] );
         if( v < orig.lower || v > orig.upper )
            skip = true;
         else
            fixed.set_bounds( bins[b], v, v );
      }
      if( skip )
         continue;
      const SolveResult r = solve_lp( fixed );
      if( r.optimal() && ( !best || sense * r.objective < sense * *best ) )
         best = r.objective;
   }
   return best;
}

/// Mixed-binary model with `nb` binaries, a few continuous columns and
/// knapsack/linking rows; bounded so every LP is finite.
inline mimf::LinearModel
random_mixed_binary( mimf::Xorshift64Star& rng, int nb, int nc, int rows )
{
   using namespace mimf;
   auto uni = [&]( double lo, double hi ) { return lo + ( hi - lo ) * rng.uniform_open(); };
   LinearModel m( "mixed" );
   std::vector<VarId> cols;
   for( int j = 0; j < nb; ++j )
      cols.push_back( m.add_variable( "z" + std::to_string( j ), 0, 1, VarKind::Binary ) );
   for( int j = 0; j < nc; ++j )
      cols.push_back( m.add_variable( "x" + std::to_string( j ), 0, uni( 1.0, 5.0 ) ) );
   for( int i = 0; i < rows; ++i )
   {
      LinearExpr e;
      double pos = 0.0;
      for( VarId c : cols )
         if( rng.uniform_open() < 0.6 )
         {
            const double a = std::round( uni( -5.0, 9.0 ) );
            e.add( c, a );
            pos += std::max( a, 0.0 ) * m.variable( c ).upper;
         }
      if( i % 2 == 0 )
         m.add_constraint( e, RowSense::LessEqual, std::round( uni( 0.3, 0.7 ) * pos ) );
      else
         m.add_constraint( e, RowSense::GreaterEqual, std::round( uni( 0.1, 0.4 ) * pos ) );
   }
   LinearExpr obj;
   for( VarId c : cols )
      obj.add( c, std::round( uni( -10.0, 10.0 ) ) );
   m.set_objective( obj, rng.uniform_open() < 0.5 ? ObjSense::Minimize : ObjSense::Maximize );
   return m;
}

} // namespace testing
