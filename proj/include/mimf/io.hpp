#pragma once

#include "mimf/bench.hpp"
#include "mimf/model.hpp"
#include "mimf/oracle.hpp"
#include "mimf/solver.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mimf {

enum class IoErrc { MpsParse, NameCollision, JsonParse, JsonSchema };

class IoError : public std::runtime_error
{
 public:
   IoError( IoErrc code, const std::string& what, int line = 0 )
       : std::runtime_error( line > 0 ? "line " + std::to_string( line ) + ": " + what : what ),
         code_( code ), line_( line )
   {
   }
   IoErrc code() const noexcept { return code_; }
   /// 1-based input line, 0 when not applicable.
   int line() const noexcept { return line_; }

 private:
   IoErrc code_;
   int line_;
};

/// [A-Za-z0-9_] only, at most 255 characters.
std::string sanitize_mps_name( std::string_view name );

/// Free-format MPS. Binaries sit between INTORG/INTEND markers with BV bounds;
/// reals use the shortest text that parses back to the same double.
/// Throws IoError(NameCollision) when two sanitized names coincide.
std::string write_mps( const LinearModel& model );

/// Parses the dialect written by write_mps. Integer columns must have bounds
/// inside [0, 1]. Throws IoError(MpsParse) with the offending line number.
LinearModel read_mps( std::string_view text );

/// First structural difference between two models (names, bounds, kinds,
/// rows, objective), or nullopt. Coefficients compare within `tol`.
std::optional<std::string> compare_models( const LinearModel& a, const LinearModel& b,
                                           double tol = 1e-12 );

/// Instance as JSON with "version": "1".
std::string instance_to_json( const Instance& inst );

/// Strict: every field required, unknown fields rejected, invariants checked.
Instance instance_from_json( std::string_view text );

std::string conjecture_report_to_json( const ConjectureReport& report );

/// Status, objective, bounds, counters and the point keyed by column name.
std::string solve_result_to_json( const SolveResult& result, const LinearModel& model );

} // namespace mimf
