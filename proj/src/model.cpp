#include "mimf/model.hpp"

#include <cmath>

namespace mimf {

LinearExpr&
LinearExpr::add( VarId var, double coef )
{
   if( coef == 0.0 )
      return *this;
   auto [it, inserted] = terms_.try_emplace( var.index, coef );
   if( !inserted )
   {
      it->second += coef;
      if( it->second == 0.0 )
         terms_.erase( it );
   }
   return *this;
}

LinearExpr&
LinearExpr::add( const LinearExpr& other, double scale )
{
   for( auto [col, coef] : other.terms_ )
      add( VarId{ col }, scale * coef );
   constant_ += scale * other.constant_;
   return *this;
}

double
LinearExpr::coefficient( VarId var ) const
{
   auto it = terms_.find( var.index );
   return it == terms_.end() ? 0.0 : it->second;
}

double
LinearExpr::evaluate( std::span<const double> point ) const
{
   double value = constant_;
   for( auto [col, coef] : terms_ )
      value += coef * point[col];
   return value;
}

double
Constraint::activity( std::span<const double> point ) const
{
   double value = 0.0;
   for( std::size_t k = 0; k < cols.size(); ++k )
      value += coefs[k] * point[cols[k]];
   return value;
}

VarId
LinearModel::add_variable( std::string name, double lower, double upper, VarKind kind )
{
   if( std::isnan( lower ) || std::isnan( upper ) || lower > upper )
      throw ModelError( ModelErrc::ReversedBounds,
                        "variable '" + name + "' has reversed bounds" );
   if( kind == VarKind::Binary && ( lower < 0.0 || upper > 1.0 ) )
      throw ModelError( ModelErrc::InvalidBinaryBounds,
                        "binary variable '" + name + "' has bounds outside [0,1]" );
   if( by_name_.contains( name ) )
      throw ModelError( ModelErrc::DuplicateName, "duplicate variable name '" + name + "'" );

   VarId id{ static_cast<std::int32_t>( variables_.size() ) };
   by_name_.emplace( name, id.index );
   variables_.push_back( Variable{ id, std::move( name ), lower, upper, kind } );
   return id;
}

int
LinearModel::add_constraint( const LinearExpr& expr, RowSense sense, double rhs,
                             std::string name )
{
   Constraint row;
   row.cols.reserve( expr.terms().size() );
   row.coefs.reserve( expr.terms().size() );
   for( auto [col, coef] : expr.terms() )
   {
      check_id( VarId{ col } );
      row.cols.push_back( col );
      row.coefs.push_back( coef );
   }
   row.sense = sense;
   row.rhs = rhs - expr.constant();
   if( name.empty() )
      name = "r" + std::to_string( constraints_.size() );
   row.name = std::move( name );
   row_names_.insert( row.name );
   constraints_.push_back( std::move( row ) );
   return static_cast<int>( constraints_.size() ) - 1;
}

void
LinearModel::set_objective( const LinearExpr& expr, ObjSense sense )
{
   for( const auto& term : expr.terms() )
      check_id( VarId{ term.first } );
   objective_ = expr;
   sense_ = sense;
}

void
LinearModel::set_bounds( VarId var, double lower, double upper )
{
   check_id( var );
   Variable& v = variables_[var.index];
   if( std::isnan( lower ) || std::isnan( upper ) || lower > upper )
      throw ModelError( ModelErrc::ReversedBounds,
                        "variable '" + v.name + "' has reversed bounds" );
   if( v.kind == VarKind::Binary && ( lower < 0.0 || upper > 1.0 ) )
      throw ModelError( ModelErrc::InvalidBinaryBounds,
                        "binary variable '" + v.name + "' has bounds outside [0,1]" );
   v.lower = lower;
   v.upper = upper;
}

std::size_t
LinearModel::num_binaries() const noexcept
{
   return static_cast<std::size_t>( std::count_if(
       variables_.begin(), variables_.end(),
       []( const Variable& v ) { return v.kind == VarKind::Binary; } ) );
}

const Variable&
LinearModel::variable( VarId id ) const
{
   check_id( id );
   return variables_[id.index];
}

VarId
LinearModel::find_variable( std::string_view name ) const
{
   auto it = by_name_.find( std::string( name ) );
   return it == by_name_.end() ? VarId{} : VarId{ it->second };
}

bool
LinearModel::has_constraint_named( std::string_view name ) const
{
   return row_names_.contains( std::string( name ) );
}

void
LinearModel::check_id( VarId id ) const
{
   if( id.index < 0 || static_cast<std::size_t>( id.index ) >= variables_.size() )
      throw ModelError( ModelErrc::UnknownVariable,
                        "unknown variable id " + std::to_string( id.index ) );
}

Evaluation
evaluate( const LinearModel& model, std::span<const double> point, double tol )
{
   if( point.size() != model.num_variables() )
      throw ModelError( ModelErrc::DimensionMismatch,
                        "point has " + std::to_string( point.size() ) + " entries, model has " +
                            std::to_string( model.num_variables() ) + " variables" );

   Evaluation result;
   result.objective = model.objective().evaluate( point );

   const auto clip = [tol]( double v ) { return v > tol ? v : 0.0; };

   result.row_violation.reserve( model.num_constraints() );
   for( const Constraint& row : model.constraints() )
   {
      const double act = row.activity( point );
      double viol = 0.0;
      switch( row.sense )
      {
      case RowSense::LessEqual: viol = act - row.rhs; break;
      case RowSense::GreaterEqual: viol = row.rhs - act; break;
      case RowSense::Equal: viol = std::abs( act - row.rhs ); break;
      }
      viol = clip( viol );
      result.row_violation.push_back( viol );
      result.max_row_violation = std::max( result.max_row_violation, viol );
   }

   for( const Variable& var : model.variables() )
   {
      const double v = point[var.id.index];
      const double below = var.lower - v;
      const double above = v - var.upper;
      result.max_bound_violation =
          std::max( result.max_bound_violation, clip( std::max( below, above ) ) );
      if( var.kind == VarKind::Binary )
         result.max_integrality_violation =
             std::max( result.max_integrality_violation, std::abs( v - std::round( v ) ) );
   }
   return result;
}

} // namespace mimf
