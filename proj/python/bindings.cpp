#include "mimf/bench.hpp"
#include "mimf/io.hpp"
#include "mimf/oracle.hpp"
#include "mimf/relaxations.hpp"
#include "mimf/solver.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace mimf;

namespace {

py::dict
result_dict( const SolveResult& r )
{
   py::dict d;
   d["status"] = std::string( to_string( r.status ) );
   d["objective"] = r.objective;
   d["best_bound"] = r.best_bound;
   d["root_bound"] = r.root_bound;
   d["lp_iterations"] = r.lp_iterations;
   d["bb_nodes"] = r.bb_nodes;
   d["wall_time"] = r.wall_time;
   d["point"] = r.point;
   return d;
}

py::dict
row_dict( const BenchRow& r )
{
   py::dict d;
   d["n"] = r.n;
   d["k"] = r.k;
   d["seed"] = r.seed;
   d["formulation"] = std::string( to_string( r.formulation ) );
   d["status"] = std::string( to_string( r.status ) );
   d["milp_objective"] = r.milp_objective;
   d["lp_bound"] = r.lp_bound;
   d["lp_gap_percent"] = r.lp_gap_percent;
   d["lp_time"] = r.lp_time;
   d["milp_time"] = r.milp_time;
   d["bb_nodes"] = r.bb_nodes;
   return d;
}

} // namespace

PYBIND11_MODULE( _core, m )
{
   m.doc() = "Relaxations of mixed-integer multilinear functions";

   py::enum_<Formulation>( m, "Formulation" )
       .value( "MC", Formulation::Mc )
       .value( "FORTET", Formulation::Fortet )
       .value( "LAMBDA", Formulation::Lambda )
       .value( "FLAMBDA", Formulation::FLambda )
       .value( "FRMC", Formulation::FRmc );

   py::class_<Instance>( m, "Instance" )
       .def_readonly( "n", &Instance::n )
       .def_readonly( "k", &Instance::k )
       .def_readonly( "c", &Instance::c )
       .def_readonly( "d", &Instance::d )
       .def_readonly( "lower", &Instance::lower )
       .def_readonly( "upper", &Instance::upper )
       .def_readonly( "demand", &Instance::demand )
       .def_readonly( "seed", &Instance::seed )
       .def( "num_terms", &Instance::num_terms )
       .def( "__eq__", []( const Instance& a, const Instance& b ) { return a == b; } );

   py::class_<LinearModel>( m, "LinearModel" )
       .def_property_readonly( "name", &LinearModel::name )
       .def_property_readonly( "num_variables", &LinearModel::num_variables )
       .def_property_readonly( "num_constraints", &LinearModel::num_constraints )
       .def_property_readonly( "num_binaries", &LinearModel::num_binaries )
       .def_property_readonly( "variable_names", []( const LinearModel& model ) {
          std::vector<std::string> names;
          for( const auto& v : model.variables() )
             names.push_back( v.name );
          return names;
       } );

   m.def( "generate_instance", &generate_instance, py::arg( "n" ), py::arg( "k" ),
          py::arg( "seed" ), py::arg( "demand_factor" ) = 0.7 );
   m.def( "instance_to_json", &instance_to_json );
   m.def( "instance_from_json", []( const std::string& text ) { return instance_from_json( text ); } );

   m.def(
       "build_relaxed_milp",
       []( const Instance& inst, Formulation f ) { return build_relaxed_milp( inst, f ).model; },
       py::arg( "instance" ), py::arg( "formulation" ) = Formulation::FLambda );
   m.def( "write_mps", &write_mps );
   m.def( "read_mps", []( const std::string& text ) { return read_mps( text ); } );
   m.def( "compare_models", &compare_models, py::arg( "a" ), py::arg( "b" ),
          py::arg( "tol" ) = 1e-12 );

   m.def(
       "solve_lp", []( const LinearModel& model ) { return result_dict( solve_lp( model ) ); } );
   m.def(
       "solve_milp",
       []( const LinearModel& model, std::int64_t node_limit, double gap ) {
          MilpOptions opts;
          opts.node_limit = node_limit;
          opts.relative_gap = gap;
          return result_dict( solve_milp( model, opts ) );
       },
       py::arg( "model" ), py::arg( "node_limit" ) = 100000, py::arg( "relative_gap" ) = 1e-6 );
   m.def( "lp_gap", &lp_gap, py::arg( "opt" ), py::arg( "lb" ) );

   m.def(
       "run_single",
       []( const Instance& inst, Formulation f, std::int64_t node_limit ) {
          MilpOptions opts;
          opts.node_limit = node_limit;
          return row_dict( run_single( inst, f, opts ) );
       },
       py::arg( "instance" ), py::arg( "formulation" ), py::arg( "node_limit" ) = 100000 );

   m.def(
       "check_projection_conjecture",
       []( const std::vector<std::pair<double, double>>& bounds, std::size_t num_binaries,
           std::size_t directions, std::uint64_t seed, Formulation f ) {
          std::vector<Interval> box;
          for( auto [lo, hi] : bounds )
             box.push_back( { lo, hi } );
          ConjectureOptions opts;
          opts.directions = directions;
          opts.seed = seed;
          opts.formulation = f;
          return conjecture_report_to_json( check_projection_conjecture( box, num_binaries, opts ) );
       },
       py::arg( "bounds" ), py::arg( "num_binaries" ), py::arg( "directions" ) = 100,
       py::arg( "seed" ) = 1, py::arg( "formulation" ) = Formulation::FLambda );

   m.def( "sample_term_bounds", []( std::size_t ni, std::uint64_t seed ) {
      std::vector<std::pair<double, double>> out;
      for( const Interval& b : sample_term_bounds( ni, seed ) )
         out.emplace_back( b.lo, b.hi );
      return out;
   } );

   py::register_exception<IoError>( m, "IoError", PyExc_ValueError );
   py::register_exception<BenchError>( m, "BenchError", PyExc_ValueError );
   py::register_exception<RelaxationError>( m, "RelaxationError", PyExc_ValueError );
   py::register_exception<ModelError>( m, "ModelError", PyExc_ValueError );
}
