#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace mimf {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Feasibility tolerance used when checking rows and bounds.
inline constexpr double kFeasTol = 1e-7;
/// Integrality tolerance for binary columns.
inline constexpr double kIntTol = 1e-6;

/// Dense column index into a LinearModel.
struct VarId {
   std::int32_t index = -1;

   constexpr bool valid() const noexcept { return index >= 0; }
   friend constexpr auto operator<=>( VarId, VarId ) = default;
};

enum class VarKind { Continuous, Binary };
enum class RowSense { LessEqual, Equal, GreaterEqual };
enum class ObjSense { Minimize, Maximize };

enum class ModelErrc {
   ReversedBounds,
   InvalidBinaryBounds,
   DuplicateName,
   UnknownVariable,
   DimensionMismatch,
};

class ModelError : public std::runtime_error
{
 public:
   ModelError( ModelErrc code, const std::string& what )
       : std::runtime_error( what ), code_( code )
   {
   }

   ModelErrc code() const noexcept { return code_; }

 private:
   ModelErrc code_;
};

struct Variable {
   VarId id;
   std::string name;
   double lower = 0.0;
   double upper = kInf;
   VarKind kind = VarKind::Continuous;
};

/// Sparse affine expression sum_j a_j x_j + constant. Zero coefficients are
/// never stored.
class LinearExpr
{
 public:
   LinearExpr() = default;
   explicit LinearExpr( double constant ) : constant_( constant ) {}

   LinearExpr& add( VarId var, double coef );
   LinearExpr& add( const LinearExpr& other, double scale = 1.0 );
   LinearExpr& add_constant( double value )
   {
      constant_ += value;
      return *this;
   }

   const std::map<std::int32_t, double>& terms() const noexcept { return terms_; }
   double constant() const noexcept { return constant_; }
   double coefficient( VarId var ) const;

   double evaluate( std::span<const double> point ) const;

 private:
   std::map<std::int32_t, double> terms_;
   double constant_ = 0.0;
};

/// A stored row sum_j coefs[j] * x[cols[j]] (sense) rhs. Columns ascend.
struct Constraint {
   std::vector<std::int32_t> cols;
   std::vector<double> coefs;
   RowSense sense = RowSense::LessEqual;
   double rhs = 0.0;
   std::string name;

   double activity( std::span<const double> point ) const;
};

struct Evaluation {
   double objective = 0.0;
   /// Per-row violation (0 when satisfied within kFeasTol), same order as rows.
   std::vector<double> row_violation;
   double max_row_violation = 0.0;
   double max_bound_violation = 0.0;
   double max_integrality_violation = 0.0;

   /// max of row and bound violations
   double max_violation() const noexcept
   {
      return std::max( max_row_violation, max_bound_violation );
   }
   bool feasible( double tol = kFeasTol, double int_tol = kIntTol ) const noexcept
   {
      return max_violation() <= tol && max_integrality_violation <= int_tol;
   }
};

/// Append-only mixed-binary linear program.
class LinearModel
{
 public:
   LinearModel() = default;
   explicit LinearModel( std::string name ) : name_( std::move( name ) ) {}

   VarId add_variable( std::string name, double lower, double upper,
                       VarKind kind = VarKind::Continuous );
   int add_constraint( const LinearExpr& expr, RowSense sense, double rhs,
                       std::string name = {} );

   void set_objective( const LinearExpr& expr, ObjSense sense = ObjSense::Minimize );
   void set_bounds( VarId var, double lower, double upper );

   const std::string& name() const noexcept { return name_; }
   void set_name( std::string name ) { name_ = std::move( name ); }

   std::size_t num_variables() const noexcept { return variables_.size(); }
   std::size_t num_constraints() const noexcept { return constraints_.size(); }
   std::size_t num_binaries() const noexcept;

   const Variable& variable( VarId id ) const;
   const std::vector<Variable>& variables() const noexcept { return variables_; }
   const std::vector<Constraint>& constraints() const noexcept { return constraints_; }
   const LinearExpr& objective() const noexcept { return objective_; }
   ObjSense sense() const noexcept { return sense_; }

   /// Returns an invalid VarId when the name is unknown.
   VarId find_variable( std::string_view name ) const;
   bool has_constraint_named( std::string_view name ) const;

 private:
   void check_id( VarId id ) const;

   std::string name_ = "model";
   std::vector<Variable> variables_;
   std::vector<Constraint> constraints_;
   LinearExpr objective_;
   ObjSense sense_ = ObjSense::Minimize;
   std::unordered_map<std::string, std::int32_t> by_name_;
   std::unordered_set<std::string> row_names_;
};

/// Objective value, row residuals and integrality of a full assignment.
Evaluation evaluate( const LinearModel& model, std::span<const double> point,
                     double tol = kFeasTol );

} // namespace mimf
