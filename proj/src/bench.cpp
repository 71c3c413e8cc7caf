#include "mimf/bench.hpp"

#include "mimf/random.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

namespace mimf {

namespace {

[[noreturn]] void
invalid( const std::string& what )
{
   throw BenchError( BenchErrc::InvalidInstance, "invalid instance: " + what );
}

bool
open_unit( double v )
{
   return v > 0.0 && v < 1.0;
}

std::string
sig4( double v )
{
   char buf[64];
   std::snprintf( buf, sizeof buf, "%.4g", v );
   return buf;
}

std::string
fixed1( double v )
{
   char buf[64];
   std::snprintf( buf, sizeof buf, "%.1f", v );
   return buf;
}

double
median( std::vector<double> v )
{
   std::erase_if( v, []( double x ) { return std::isnan( x ); } );
   if( v.empty() )
      return std::numeric_limits<double>::quiet_NaN();
   std::sort( v.begin(), v.end() );
   const std::size_t h = v.size() / 2;
   return v.size() % 2 ? v[h] : 0.5 * ( v[h - 1] + v[h] );
}

double
gap_or_nan( double opt, double lb )
{
   if( std::isnan( opt ) || std::isnan( lb ) )
      return std::numeric_limits<double>::quiet_NaN();
   return lp_gap( opt, lb ).value_or( std::numeric_limits<double>::quiet_NaN() );
}

bool
row_less( const BenchRow& a, const BenchRow& b )
{
   if( a.n != b.n )
      return a.n < b.n;
   if( a.k != b.k )
      return a.k < b.k;
   if( a.formulation != b.formulation )
      return a.formulation < b.formulation;
   return a.seed < b.seed;
}

} // namespace

void
Instance::validate() const
{
   if( k < 1 )
      invalid( "k must be at least 1" );
   if( n < k )
      invalid( "n must be at least k" );
   if( c.size() != n || d.size() != n || lower.size() != n || upper.size() != n )
      invalid( "vector lengths must equal n" );
   for( std::size_t i = 0; i < n; ++i )
   {
      if( !open_unit( c[i] ) )
         invalid( "c[" + std::to_string( i ) + "] outside (0,1)" );
      if( !open_unit( d[i] ) )
         invalid( "d[" + std::to_string( i ) + "] outside (0,1)" );
      if( !open_unit( lower[i] ) )
         invalid( "lower[" + std::to_string( i ) + "] outside (0,1)" );
      if( upper[i] != 10.0 * lower[i] )
         invalid( "upper[" + std::to_string( i ) + "] differs from 10 * lower" );
   }
   if( !std::isfinite( demand ) )
      invalid( "demand must be finite" );
}

Instance
generate_instance( std::size_t n, std::size_t k, std::uint64_t seed, double demand_factor )
{
   if( k < 1 || n < k )
      invalid( "generate_instance needs n >= k >= 1" );
   Instance inst;
   inst.n = n;
   inst.k = k;
   inst.seed = seed;
   Xorshift64Star rng( seed );
   for( auto* vec : { &inst.c, &inst.d, &inst.lower } )
   {
      vec->resize( n );
      for( double& v : *vec )
         v = rng.uniform_open();
   }
   inst.upper.resize( n );
   for( std::size_t i = 0; i < n; ++i )
      inst.upper[i] = 10.0 * inst.lower[i];
   inst.demand = demand_factor * static_cast<double>( n );
   return inst;
}

double
demand_activity( const Instance& inst, std::span<const double> x, std::span<const double> z )
{
   double sum = 0.0;
   for( std::size_t t = 0; t < inst.num_terms(); ++t )
   {
      double prod = 1.0;
      for( std::size_t j = t; j < t + inst.k; ++j )
         prod *= x[j] * z[j];
      sum += prod;
   }
   return sum;
}

double
instance_objective( const Instance& inst, std::span<const double> x, std::span<const double> z )
{
   double obj = 0.0;
   for( std::size_t i = 0; i < inst.n; ++i )
      obj += inst.c[i] * x[i] + inst.d[i] * z[i];
   return obj;
}

RelaxedMilp
build_relaxed_milp( const Instance& inst, Formulation formulation )
{
   inst.validate();
   RelaxedMilp out;
   out.model.set_name( "mimf_n" + std::to_string( inst.n ) + "_k" + std::to_string( inst.k ) +
                       "_s" + std::to_string( inst.seed ) + "_" +
                       std::string( to_string( formulation ) ) );
   for( std::size_t i = 0; i < inst.n; ++i )
      out.x.push_back(
          out.model.add_variable( "x" + std::to_string( i ), inst.lower[i], inst.upper[i] ) );
   for( std::size_t i = 0; i < inst.n; ++i )
      out.z.push_back(
          out.model.add_variable( "z" + std::to_string( i ), 0.0, 1.0, VarKind::Binary ) );

   LinearExpr demand;
   for( std::size_t t = 0; t < inst.num_terms(); ++t )
   {
      MimfTerm term;
      for( std::size_t j = t; j < t + inst.k; ++j )
      {
         term.continuous.push_back( out.x[j] );
         term.binaries.push_back( out.z[j] );
         term.bounds.push_back( { inst.lower[j], inst.upper[j] } );
      }
      BuildOptions opts;
      opts.prefix = "t" + std::to_string( t );
      out.terms.push_back( build_relaxation( out.model, term, formulation, opts ) );
      demand.add( out.terms.back().phi_hat, 1.0 );
   }
   out.demand_row = out.model.add_constraint( demand, RowSense::GreaterEqual, inst.demand, "demand" );

   LinearExpr obj;
   for( std::size_t i = 0; i < inst.n; ++i )
   {
      obj.add( out.x[i], inst.c[i] );
      obj.add( out.z[i], inst.d[i] );
   }
   out.model.set_objective( obj, ObjSense::Minimize );
   return out;
}

BenchRow
run_single( const Instance& inst, Formulation formulation, const MilpOptions& options )
{
   const RelaxedMilp milp = build_relaxed_milp( inst, formulation );
   BenchRow row;
   row.n = inst.n;
   row.k = inst.k;
   row.seed = inst.seed;
   row.formulation = formulation;

   const SolveResult lp = solve_lp( milp.model, options.lp );
   row.lp_time = lp.wall_time;
   row.lp_bound = lp.optimal() ? lp.objective : std::numeric_limits<double>::quiet_NaN();

   const SolveResult ip = solve_milp( milp.model, options );
   row.status = ip.status;
   row.milp_time = ip.wall_time;
   row.bb_nodes = static_cast<double>( ip.bb_nodes );
   row.milp_objective = ip.objective;
   row.lp_gap_percent = gap_or_nan( row.milp_objective, row.lp_bound );

   if( ip.optimal() && lp.optimal() &&
       row.lp_bound > row.milp_objective + 1e-6 * std::max( 1.0, std::abs( row.milp_objective ) ) )
      throw BenchError( BenchErrc::BoundViolation,
                        "root LP bound " + sig4( row.lp_bound ) + " exceeds MILP optimum " +
                            sig4( row.milp_objective ) );
   return row;
}

std::vector<BenchRow>
aggregate_median( std::vector<BenchRow> rows )
{
   std::sort( rows.begin(), rows.end(), row_less );
   std::vector<BenchRow> out;
   for( std::size_t i = 0; i < rows.size(); )
   {
      std::size_t j = i;
      while( j < rows.size() && rows[j].n == rows[i].n && rows[j].k == rows[i].k &&
             rows[j].formulation == rows[i].formulation )
         ++j;
      BenchRow agg;
      agg.n = rows[i].n;
      agg.k = rows[i].k;
      agg.seed = 0;
      agg.runs = 0;
      agg.formulation = rows[i].formulation;
      agg.status = SolveStatus::Optimal;
      std::vector<double> obj, lb, lpt, ipt, nodes;
      for( std::size_t r = i; r < j; ++r )
      {
         agg.runs += rows[r].runs;
         if( rows[r].status != SolveStatus::Optimal && agg.status == SolveStatus::Optimal )
            agg.status = rows[r].status;
         obj.push_back( rows[r].milp_objective );
         lb.push_back( rows[r].lp_bound );
         lpt.push_back( rows[r].lp_time );
         ipt.push_back( rows[r].milp_time );
         nodes.push_back( rows[r].bb_nodes );
      }
      agg.milp_objective = median( obj );
      agg.lp_bound = median( lb );
      agg.lp_gap_percent = gap_or_nan( agg.milp_objective, agg.lp_bound );
      agg.lp_time = median( lpt );
      agg.milp_time = median( ipt );
      agg.bb_nodes = median( nodes );
      out.push_back( agg );
      i = j;
   }
   return out;
}

ExperimentResult
run_experiment( const ExperimentConfig& config )
{
   ExperimentResult result;
   for( std::size_t n : config.n_values )
      for( std::uint64_t seed : config.seeds )
      {
         const Instance inst = generate_instance( n, config.k, seed, config.demand_factor );
         for( Formulation f : config.formulations )
            result.runs.push_back( run_single( inst, f, config.milp ) );
      }
   std::sort( result.runs.begin(), result.runs.end(), row_less );
   result.aggregated = aggregate_median( result.runs );
   return result;
}

std::string
emit_table( std::vector<BenchRow> rows, TableFormat format )
{
   if( rows.empty() )
      throw BenchError( BenchErrc::EmptyReport, "no rows to emit" );
   std::sort( rows.begin(), rows.end(), row_less );
   std::ostringstream os;

   if( format == TableFormat::Csv )
   {
      os << "n,k,seed,runs,formulation,status,milp_objective,lp_bound,lp_gap_percent,lp_time,"
            "milp_time,bb_nodes\n";
      for( const auto& r : rows )
         os << r.n << ',' << r.k << ',' << r.seed << ',' << r.runs << ','
            << to_string( r.formulation ) << ',' << to_string( r.status ) << ','
            << sig4( r.milp_objective ) << ',' << sig4( r.lp_bound ) << ','
            << fixed1( r.lp_gap_percent ) << ',' << sig4( r.lp_time ) << ','
            << sig4( r.milp_time ) << ',' << sig4( r.bb_nodes ) << '\n';
      return os.str();
   }

   std::vector<Formulation> forms;
   for( const auto& r : rows )
      if( std::find( forms.begin(), forms.end(), r.formulation ) == forms.end() )
         forms.push_back( r.formulation );
   std::sort( forms.begin(), forms.end() );

   os << "| n | k |";
   for( Formulation f : forms )
   {
      const std::string tag( to_string( f ) );
      os << ' ' << tag << " obj | " << tag << " gap (%) | " << tag << " LP time (s) | " << tag
         << " MILP time (s) |";
   }
   os << "\n|---|---|";
   for( std::size_t i = 0; i < forms.size(); ++i )
      os << "---|---|---|---|";
   os << '\n';

   // one line per (n, k, seed); aggregated input has seed 0 throughout
   std::map<std::tuple<std::size_t, std::size_t, std::uint64_t>, std::map<Formulation, BenchRow>>
       lines;
   for( const auto& r : rows )
      lines[{ r.n, r.k, r.seed }][r.formulation] = r;
   for( const auto& [key, per_form] : lines )
   {
      os << "| " << std::get<0>( key ) << " | " << std::get<1>( key ) << " |";
      for( Formulation f : forms )
      {
         auto it = per_form.find( f );
         if( it == per_form.end() )
         {
            os << " - | - | - | - |";
            continue;
         }
         const BenchRow& r = it->second;
         os << ' ' << sig4( r.milp_objective ) << " | " << fixed1( r.lp_gap_percent ) << " | "
            << sig4( r.lp_time ) << " | " << sig4( r.milp_time ) << " |";
      }
      os << '\n';
   }
   return os.str();
}

} // namespace mimf
