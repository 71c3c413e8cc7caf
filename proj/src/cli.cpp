#include "mimf/cli.hpp"

#include "mimf/bench.hpp"
#include "mimf/io.hpp"
#include "mimf/oracle.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace mimf {

namespace {

struct UsageError : std::runtime_error {
   using std::runtime_error::runtime_error;
};

std::string
read_file( const std::string& path )
{
   std::ifstream in( path, std::ios::binary );
   if( !in )
      throw UsageError( "cannot open '" + path + "'" );
   std::ostringstream ss;
   ss << in.rdbuf();
   return ss.str();
}

void
emit( const std::string& text, const std::string& path, std::ostream& out )
{
   if( path.empty() || path == "-" )
   {
      out << text;
      return;
   }
   std::ofstream file( path, std::ios::binary );
   if( !file || !( file << text ) )
      throw UsageError( "cannot write '" + path + "'" );
}

const std::map<std::string, Formulation> kFormulations{
    { "flambda", Formulation::FLambda }, { "frmc", Formulation::FRmc } };

Formulation
formulation_of( const std::string& tag )
{
   return kFormulations.at( tag );
}

auto
formulation_check()
{
   return CLI::IsMember( { "flambda", "frmc" } );
}

std::shared_ptr<spdlog::logger>
make_logger( std::ostream& err )
{
   auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>( err );
   auto logger = std::make_shared<spdlog::logger>( "mimf", sink );
   logger->set_pattern( "[%l] %v" );
   spdlog::level::level_enum level = spdlog::level::warn;
   if( const char* env = std::getenv( "MIMF_LOG_LEVEL" ) )
      level = spdlog::level::from_str( env );
   logger->set_level( level );
   return logger;
}

bool
is_limit( SolveStatus s )
{
   return s == SolveStatus::NodeLimit || s == SolveStatus::IterLimit;
}

} // namespace

int
cli_dispatch( std::span<const std::string> args, std::ostream& out, std::ostream& err )
{
   auto log = make_logger( err );

   CLI::App app{ "Relaxations of mixed-integer multilinear functions", "mimf" };
   app.require_subcommand( 1 );
   app.set_help_all_flag( "--help-all", "Show help for every subcommand" );

   // generate
   std::size_t gen_n = 0, gen_k = 0;
   std::uint64_t gen_seed = 1;
   double demand_factor = 0.7;
   std::string gen_out;
   auto* generate = app.add_subcommand( "generate", "Write a random benchmark instance as JSON" );
   generate->add_option( "-n", gen_n, "Number of variable pairs" )->required()->check( CLI::PositiveNumber );
   generate->add_option( "-k", gen_k, "Factors per term" )->required()->check( CLI::PositiveNumber );
   generate->add_option( "--seed", gen_seed, "PRNG seed" );
   generate->add_option( "--demand-factor", demand_factor, "Demand as a multiple of n" );
   generate->add_option( "-o,--output", gen_out, "Output file (default stdout)" );

   // build
   std::string build_instance, build_out;
   std::string build_form = "flambda";
   auto* build = app.add_subcommand( "build", "Relax an instance and write the MILP as MPS" );
   build->add_option( "-i,--instance", build_instance, "Instance JSON file" )->required();
   build->add_option( "-f,--formulation", build_form, "flambda or frmc" )
       ->check( formulation_check() );
   build->add_option( "-o,--output", build_out, "Output file (default stdout)" );

   // solve
   std::string solve_mps, solve_instance, solve_mode = "milp", solve_out;
   std::string solve_form = "flambda";
   std::int64_t node_limit = 100000;
   double rel_gap = 1e-6;
   auto* solve = app.add_subcommand( "solve", "Solve an MPS model or a relaxed instance" );
   auto* mps_opt = solve->add_option( "--mps", solve_mps, "MPS file" );
   auto* inst_opt = solve->add_option( "-i,--instance", solve_instance, "Instance JSON file" );
   mps_opt->excludes( inst_opt );
   solve->add_option( "-f,--formulation", solve_form, "flambda or frmc (with --instance)" )
       ->check( formulation_check() );
   solve->add_option( "--mode", solve_mode, "lp or milp" )->check( CLI::IsMember( { "lp", "milp" } ) );
   solve->add_option( "--node-limit", node_limit, "Branch-and-bound node limit" )->check( CLI::PositiveNumber );
   solve->add_option( "--gap", rel_gap, "Relative optimality gap" )->check( CLI::NonNegativeNumber );
   solve->add_option( "-o,--output", solve_out, "Output file (default stdout)" );

   // verify-hull
   std::size_t ni = 0, nj = 0, directions = 100;
   std::uint64_t hull_seed = 1;
   std::uint64_t bounds_seed = 0;
   std::string hull_form = "flambda";
   std::string hull_out;
   auto* verify = app.add_subcommand( "verify-hull", "Probe the hull of one term shape" );
   verify->add_option( "--ni", ni, "Continuous factors" )->required()->check( CLI::Range( 0, 10 ) );
   verify->add_option( "--nj", nj, "Binary factors" )->required()->check( CLI::Range( 0, 10 ) );
   verify->add_option( "--directions", directions, "Random objective directions" )->check( CLI::PositiveNumber );
   verify->add_option( "--seed", hull_seed, "Seed of the direction stream" );
   auto* bseed = verify->add_option( "--bounds-seed", bounds_seed, "Seed of the sampled bounds (default: --seed)" );
   verify->add_option( "-f,--formulation", hull_form, "flambda or frmc" )
       ->check( formulation_check() );
   verify->add_option( "-o,--output", hull_out, "Output file (default stdout)" );

   // bench
   std::vector<std::size_t> bench_n{ 20, 50, 100 };
   std::size_t bench_k = 4, seeds = 5;
   std::uint64_t first_seed = 1;
   std::string format = "csv", bench_out;
   bool aggregate = false;
   std::vector<std::string> bench_forms{ "flambda", "frmc" };
   std::int64_t bench_nodes = 100000;
   auto* bench = app.add_subcommand( "bench", "Run the benchmark protocol and print a table" );
   bench->add_option( "-n", bench_n, "Problem sizes" )->delimiter( ',' )->check( CLI::PositiveNumber );
   bench->add_option( "-k", bench_k, "Factors per term" )->check( CLI::PositiveNumber );
   bench->add_option( "--seeds", seeds, "Number of seeds per size" )->check( CLI::PositiveNumber );
   bench->add_option( "--first-seed", first_seed, "First seed" );
   bench->add_option( "--format", format, "csv or markdown" )->check( CLI::IsMember( { "csv", "markdown" } ) );
   bench->add_flag( "--aggregate", aggregate, "Median over seeds per size" );
   bench->add_option( "--formulations", bench_forms, "Formulations to compare" )
       ->delimiter( ',' )
       ->check( formulation_check() );
   bench->add_option( "--node-limit", bench_nodes, "Branch-and-bound node limit" )->check( CLI::PositiveNumber );
   bench->add_option( "-o,--output", bench_out, "Output file (default stdout)" );

   std::vector<const char*> argv{ "mimf" };
   for( const auto& a : args )
      argv.push_back( a.c_str() );

   try
   {
      app.parse( static_cast<int>( argv.size() ), argv.data() );
   }
   catch( const CLI::CallForHelp& )
   {
      out << app.help();
      return kExitOk;
   }
   catch( const CLI::CallForAllHelp& )
   {
      out << app.help( "", CLI::AppFormatMode::All );
      return kExitOk;
   }
   catch( const CLI::ParseError& e )
   {
      err << "error: " << e.what() << '\n';
      err << "run 'mimf --help' for usage\n";
      return kExitUsage;
   }

   try
   {
      if( generate->parsed() )
      {
         if( gen_n < gen_k )
            throw UsageError( "-n must be at least -k" );
         const Instance inst = generate_instance( gen_n, gen_k, gen_seed, demand_factor );
         log->info( "generated n={} k={} seed={}", gen_n, gen_k, gen_seed );
         emit( instance_to_json( inst ), gen_out, out );
         return kExitOk;
      }

      if( build->parsed() )
      {
         const Instance inst = instance_from_json( read_file( build_instance ) );
         const RelaxedMilp milp = build_relaxed_milp( inst, formulation_of( build_form ) );
         log->info( "built {} with {} rows and {} columns", build_form,
                    milp.model.num_constraints(), milp.model.num_variables() );
         emit( write_mps( milp.model ), build_out, out );
         return kExitOk;
      }

      if( solve->parsed() )
      {
         LinearModel model;
         if( !solve_mps.empty() )
            model = read_mps( read_file( solve_mps ) );
         else if( !solve_instance.empty() )
            model = build_relaxed_milp( instance_from_json( read_file( solve_instance ) ),
                                        formulation_of( solve_form ) )
                        .model;
         else
            throw UsageError( "solve needs --mps or --instance" );

         SolveResult result;
         if( solve_mode == "lp" )
            result = solve_lp( model );
         else
         {
            MilpOptions opts;
            opts.node_limit = node_limit;
            opts.relative_gap = rel_gap;
            result = solve_milp( model, opts );
         }
         log->info( "{} after {} iterations and {} nodes", to_string( result.status ),
                    result.lp_iterations, result.bb_nodes );
         emit( solve_result_to_json( result, model ), solve_out, out );
         return is_limit( result.status ) ? kExitSolverLimit : kExitOk;
      }

      if( verify->parsed() )
      {
         if( ni + nj == 0 )
            throw UsageError( "--ni + --nj must be at least 1" );
         if( ni + nj > 10 )
            throw UsageError( "--ni + --nj must be at most 10" );
         ConjectureOptions opts;
         opts.directions = directions;
         opts.seed = hull_seed;
         opts.formulation = formulation_of( hull_form );
         const auto bounds = sample_term_bounds( ni, bseed->count() ? bounds_seed : hull_seed );
         const ConjectureReport report = check_projection_conjecture( bounds, nj, opts );
         log->info( "{} counterexamples over {} directions", report.counterexamples.size(),
                    report.directions_tested );
         emit( conjecture_report_to_json( report ), hull_out, out );
         return kExitOk;
      }

      if( bench->parsed() )
      {
         ExperimentConfig config;
         config.n_values = bench_n;
         config.k = bench_k;
         config.seeds.clear();
         for( std::size_t s = 0; s < seeds; ++s )
            config.seeds.push_back( first_seed + s );
         config.formulations.clear();
         for( const auto& tag : bench_forms )
            config.formulations.push_back( formulation_of( tag ) );
         config.milp.node_limit = bench_nodes;
         for( std::size_t n : bench_n )
            if( n < bench_k )
               throw UsageError( "every -n must be at least -k" );
         const ExperimentResult result = run_experiment( config );
         bool limited = false;
         for( const BenchRow& row : result.runs )
         {
            log->info( "n={} seed={} {} {}", row.n, row.seed, to_string( row.formulation ),
                       to_string( row.status ) );
            limited = limited || is_limit( row.status );
         }
         const auto& rows = aggregate ? result.aggregated : result.runs;
         emit( emit_table( rows, format == "csv" ? TableFormat::Csv : TableFormat::Markdown ),
               bench_out, out );
         return limited ? kExitSolverLimit : kExitOk;
      }
   }
   catch( const std::exception& e )
   {
      err << "error: " << e.what() << '\n';
      return kExitUsage;
   }
   return kExitUsage;
}

} // namespace mimf
