#include "mimf/io.hpp"

#include <json.hpp>

#include <cmath>
#include <set>

namespace mimf {

namespace {

using nlohmann::json;

[[noreturn]] void
schema( const std::string& what )
{
   throw IoError( IoErrc::JsonSchema, what );
}

const json&
field( const json& obj, const char* name )
{
   auto it = obj.find( name );
   if( it == obj.end() )
      schema( std::string( "missing field '" ) + name + "'" );
   return *it;
}

std::size_t
count_field( const json& obj, const char* name )
{
   const json& v = field( obj, name );
   if( !v.is_number_unsigned() )
      schema( std::string( "field '" ) + name + "' must be a nonnegative integer" );
   return v.get<std::size_t>();
}

double
real_field( const json& obj, const char* name )
{
   const json& v = field( obj, name );
   if( !v.is_number() )
      schema( std::string( "field '" ) + name + "' must be a number" );
   return v.get<double>();
}

std::vector<double>
vector_field( const json& obj, const char* name )
{
   const json& v = field( obj, name );
   if( !v.is_array() )
      schema( std::string( "field '" ) + name + "' must be an array" );
   std::vector<double> out;
   for( const json& e : v )
   {
      if( !e.is_number() )
         schema( std::string( "field '" ) + name + "' must hold numbers" );
      out.push_back( e.get<double>() );
   }
   return out;
}

json
real_or_null( double v )
{
   return std::isfinite( v ) ? json( v ) : json( nullptr );
}

} // namespace

std::string
instance_to_json( const Instance& inst )
{
   json j;
   j["version"] = "1";
   j["n"] = inst.n;
   j["k"] = inst.k;
   j["c"] = inst.c;
   j["d"] = inst.d;
   j["lower"] = inst.lower;
   j["upper"] = inst.upper;
   j["demand"] = inst.demand;
   j["seed"] = inst.seed;
   return j.dump( 2 ) + "\n";
}

Instance
instance_from_json( std::string_view text )
{
   json j;
   try
   {
      j = json::parse( text );
   }
   catch( const json::parse_error& e )
   {
      throw IoError( IoErrc::JsonParse, e.what() );
   }
   if( !j.is_object() )
      schema( "instance must be a JSON object" );

   static const std::set<std::string> known{ "version", "n",     "k",      "c",   "d",
                                             "lower",   "upper", "demand", "seed" };
   for( const auto& [key, value] : j.items() )
      if( !known.contains( key ) )
         schema( "unknown field '" + key + "'" );

   const json& version = field( j, "version" );
   if( !version.is_string() || version.get<std::string>() != "1" )
      schema( "field 'version' must be \"1\"" );

   Instance inst;
   inst.n = count_field( j, "n" );
   inst.k = count_field( j, "k" );
   inst.c = vector_field( j, "c" );
   inst.d = vector_field( j, "d" );
   inst.lower = vector_field( j, "lower" );
   inst.upper = vector_field( j, "upper" );
   inst.demand = real_field( j, "demand" );
   const json& seed = field( j, "seed" );
   if( !seed.is_number_unsigned() )
      schema( "field 'seed' must be a nonnegative integer" );
   inst.seed = seed.get<std::uint64_t>();

   try
   {
      inst.validate();
   }
   catch( const BenchError& e )
   {
      schema( e.what() );
   }
   return inst;
}

std::string
conjecture_report_to_json( const ConjectureReport& report )
{
   json j;
   j["num_continuous"] = report.num_continuous;
   j["num_binaries"] = report.num_binaries;
   j["formulation"] = std::string( to_string( report.formulation ) );
   json bounds = json::array();
   for( const Interval& b : report.bounds )
      bounds.push_back( { b.lo, b.hi } );
   j["bounds"] = bounds;
   j["directions_tested"] = report.directions_tested;
   json ce = json::array();
   for( const Counterexample& c : report.counterexamples )
      ce.push_back( { { "direction", c.direction }, { "point", c.point },
                      { "slack", real_or_null( c.slack ) } } );
   j["counterexamples"] = ce;
   j["max_residual"] = report.max_residual;
   j["vertices_total"] = report.vertices_total;
   j["vertices_lifted"] = report.vertices_lifted;
   j["max_lift_violation"] = report.max_lift_violation;
   j["holds"] = report.holds();
   j["seconds"] = report.seconds;
   return j.dump( 2 ) + "\n";
}

std::string
solve_result_to_json( const SolveResult& result, const LinearModel& model )
{
   json j;
   j["status"] = std::string( to_string( result.status ) );
   j["objective"] = real_or_null( result.objective );
   j["best_bound"] = real_or_null( result.best_bound );
   j["root_bound"] = real_or_null( result.root_bound );
   j["lp_iterations"] = result.lp_iterations;
   j["bb_nodes"] = result.bb_nodes;
   j["wall_time"] = result.wall_time;
   json point = json::object();
   for( std::size_t i = 0; i < result.point.size() && i < model.num_variables(); ++i )
      point[model.variables()[i].name] = result.point[i];
   j["point"] = point;
   return j.dump( 2 ) + "\n";
}

} // namespace mimf
