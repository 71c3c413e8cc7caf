#include "mimf/solver.hpp"

#include "simplex.hpp"

#include <chrono>
#include <cmath>
#include <memory>
#include <queue>

namespace mimf {

std::string_view
to_string( SolveStatus status )
{
   switch( status )
   {
   case SolveStatus::Optimal: return "optimal";
   case SolveStatus::Infeasible: return "infeasible";
   case SolveStatus::Unbounded: return "unbounded";
   case SolveStatus::NodeLimit: return "node_limit";
   case SolveStatus::IterLimit: return "iteration_limit";
   }
   return "unknown";
}

namespace {

using Clock = std::chrono::steady_clock;

double
seconds_since( Clock::time_point start )
{
   return std::chrono::duration<double>( Clock::now() - start ).count();
}

struct Node {
   int parent = -1;
   int var = -1;
   std::int8_t value = 0;
   double bound = -kInf; // internal minimisation sense
   /// Parent's optimal basis, held while the node waits in the queue.
   std::shared_ptr<const std::vector<std::uint8_t>> basis;
};

struct OpenEntry {
   double bound;
   int id;
   bool operator>( const OpenEntry& o ) const
   {
      return bound > o.bound || ( bound == o.bound && id > o.id );
   }
};

} // namespace

SolveResult
solve_lp( const LinearModel& model, const LpOptions& options )
{
   const auto start = Clock::now();
   detail::BoundedSimplex lp( model, options );
   SolveResult result;
   result.status = lp.solve();
   result.lp_iterations = lp.iterations();
   if( result.status == SolveStatus::Optimal )
   {
      result.point = lp.primal();
      result.objective = lp.objective();
      lp.duals( result.row_duals, result.reduced_costs );
   }
   else
      result.objective = std::nan( "" );
   result.best_bound = result.root_bound = result.objective;
   result.wall_time = seconds_since( start );
   return result;
}

SolveResult
solve_milp( const LinearModel& model, std::int64_t node_limit )
{
   MilpOptions options;
   options.node_limit = node_limit;
   return solve_milp( model, options );
}

SolveResult
solve_milp( const LinearModel& model, const MilpOptions& options )
{
   const auto start = Clock::now();
   const double sense = model.sense() == ObjSense::Maximize ? -1.0 : 1.0;
   detail::BoundedSimplex lp( model, options.lp );

   std::vector<int> binaries;
   for( const Variable& v : model.variables() )
      if( v.kind == VarKind::Binary )
         binaries.push_back( v.id.index );

   // -1 free, 0/1 fixed by branching
   std::vector<std::int8_t> applied( model.num_variables(), -1 );
   std::vector<std::int8_t> wanted( model.num_variables(), -1 );

   std::vector<Node> nodes;
   nodes.push_back( Node{} );
   std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<>> open;

   double incumbent = kInf;
   std::vector<double> best_point;
   SolveResult result;
   result.root_bound = std::nan( "" );
   std::int64_t processed = 0;
   int current = 0;
   bool hit_limit = false;

   const auto gap_tol = [&]( double inc ) {
      return options.relative_gap * std::max( 1.0, std::abs( inc ) );
   };

   const auto apply = [&]( int id ) {
      for( int j : binaries )
         wanted[j] = -1;
      for( int k = id; k >= 0 && nodes[k].var >= 0; k = nodes[k].parent )
         wanted[nodes[k].var] = nodes[k].value;
      for( int j : binaries )
      {
         if( wanted[j] == applied[j] )
            continue;
         if( wanted[j] < 0 )
            lp.reset_column_bounds( j );
         else
            lp.set_column_bounds( j, wanted[j], wanted[j] );
         applied[j] = wanted[j];
      }
   };

   while( true )
   {
      if( current < 0 )
      {
         while( !open.empty() && open.top().bound >= incumbent - gap_tol( incumbent ) )
         {
            nodes[open.top().id].basis.reset();
            open.pop();
         }
         if( open.empty() )
            break;
         current = open.top().id;
         open.pop();
         if( nodes[current].basis )
         {
            apply( current );
            lp.load_basis( *nodes[current].basis );
            nodes[current].basis.reset();
         }
      }
      if( processed >= options.node_limit )
      {
         open.push( { nodes[current].bound, current } );
         hit_limit = true;
         break;
      }

      apply( current );
      const SolveStatus status = lp.solve_dual();
      ++processed;

      if( status == SolveStatus::IterLimit || status == SolveStatus::Unbounded )
      {
         result.status = status;
         result.objective = std::nan( "" );
         result.lp_iterations = lp.iterations();
         result.bb_nodes = processed;
         result.wall_time = seconds_since( start );
         return result;
      }
      if( status == SolveStatus::Infeasible )
      {
         current = -1;
         continue;
      }

      const double obj = sense * lp.objective();
      if( processed == 1 )
         result.root_bound = sense * obj;
      if( obj >= incumbent - gap_tol( incumbent ) )
      {
         current = -1;
         continue;
      }

      std::vector<double> point = lp.primal();
      int branch = -1;
      double best_frac = kIntTol;
      for( int j : binaries )
      {
         const double frac = std::abs( point[j] - std::round( point[j] ) );
         if( frac > best_frac )
         {
            best_frac = frac;
            branch = j;
         }
      }

      if( branch < 0 )
      {
         incumbent = obj;
         best_point = std::move( point );
         current = -1;
         continue;
      }

      const std::int8_t near = point[branch] >= 0.5 ? 1 : 0;
      const int near_id = static_cast<int>( nodes.size() );
      nodes.push_back( Node{ current, branch, near, obj, {} } );
      const int far_id = static_cast<int>( nodes.size() );
      nodes.push_back( Node{ current, branch, static_cast<std::int8_t>( 1 - near ), obj,
                             std::make_shared<const std::vector<std::uint8_t>>( lp.save_basis() ) } );
      open.push( { obj, far_id } );
      current = near_id;
   }

   double bound = incumbent;
   if( !open.empty() )
      bound = std::min( bound, open.top().bound );

   result.lp_iterations = lp.iterations();
   result.bb_nodes = processed;
   result.best_bound = sense * bound;
   if( std::isfinite( incumbent ) )
   {
      result.point = std::move( best_point );
      result.objective = sense * incumbent;
   }
   else
      result.objective = std::nan( "" );

   if( hit_limit && !( std::isfinite( incumbent ) &&
                       incumbent - bound <= gap_tol( incumbent ) ) )
      result.status = SolveStatus::NodeLimit;
   else
      result.status = std::isfinite( incumbent ) ? SolveStatus::Optimal : SolveStatus::Infeasible;
   result.wall_time = seconds_since( start );
   return result;
}

std::optional<double>
lp_gap( double opt, double lb )
{
   if( opt == 0.0 )
      return std::nullopt;
   return ( opt - lb ) / opt * 100.0;
}

} // namespace mimf
