#include "mimf/io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace mimf {

namespace {

constexpr std::string_view kObjRow = "OBJ";

std::string
format_real( double v )
{
   char buf[64];
   auto [end, ec] = std::to_chars( buf, buf + sizeof buf, v );
   (void) ec;
   return std::string( buf, end );
}

char
sense_letter( RowSense s )
{
   switch( s )
   {
   case RowSense::LessEqual: return 'L';
   case RowSense::GreaterEqual: return 'G';
   case RowSense::Equal: return 'E';
   }
   return 'E';
}

std::vector<std::string>
sanitized_unique( const std::vector<std::string>& raw, const char* what,
                  std::unordered_set<std::string>& taken )
{
   std::vector<std::string> out;
   out.reserve( raw.size() );
   for( const auto& name : raw )
   {
      std::string s = sanitize_mps_name( name );
      if( !taken.insert( s ).second )
         throw IoError( IoErrc::NameCollision,
                        std::string( what ) + " name '" + name + "' collides as '" + s + "'" );
      out.push_back( std::move( s ) );
   }
   return out;
}

std::vector<std::string_view>
tokenize( std::string_view line )
{
   std::vector<std::string_view> out;
   std::size_t i = 0;
   while( i < line.size() )
   {
      while( i < line.size() && std::isspace( static_cast<unsigned char>( line[i] ) ) )
         ++i;
      std::size_t j = i;
      while( j < line.size() && !std::isspace( static_cast<unsigned char>( line[j] ) ) )
         ++j;
      if( j > i )
         out.push_back( line.substr( i, j - i ) );
      i = j;
   }
   return out;
}

enum class Section { None, Name, ObjSense, Rows, Columns, Rhs, Bounds, End };

struct ParsedColumn {
   std::string name;
   bool integer = false;
   bool binary_marked = false;
   double lower = 0.0;
   double upper = kInf;
   bool upper_set = false;
   std::vector<std::pair<int, double>> entries; // row index, -1 = objective
};

struct ParsedRow {
   std::string name;
   RowSense sense = RowSense::LessEqual;
   double rhs = 0.0;
};

class Parser
{
 public:
   explicit Parser( std::string_view text ) : text_( text ) {}

   LinearModel run()
   {
      std::size_t pos = 0;
      while( pos <= text_.size() && section_ != Section::End )
      {
         std::size_t eol = text_.find( '\n', pos );
         if( eol == std::string_view::npos )
            eol = text_.size();
         std::string_view line = text_.substr( pos, eol - pos );
         if( !line.empty() && line.back() == '\r' )
            line.remove_suffix( 1 );
         ++line_no_;
         handle( line );
         if( eol == text_.size() )
            break;
         pos = eol + 1;
      }
      if( section_ != Section::End )
         fail( "missing ENDATA" );
      return build();
   }

 private:
   [[noreturn]] void fail( const std::string& what ) const
   {
      throw IoError( IoErrc::MpsParse, what, line_no_ );
   }

   double number( std::string_view tok ) const
   {
      double v = 0.0;
      const char* first = tok.data();
      const char* last = tok.data() + tok.size();
      if( !tok.empty() && tok.front() == '+' )
         ++first;
      auto [ptr, ec] = std::from_chars( first, last, v );
      if( ec != std::errc() || ptr != last )
      {
         // from_chars rejects spellings such as "inf" on some libraries
         if( tok == "Inf" || tok == "inf" || tok == "+inf" || tok == "Infinity" )
            return kInf;
         if( tok == "-Inf" || tok == "-inf" || tok == "-Infinity" )
            return -kInf;
         fail( "malformed number '" + std::string( tok ) + "'" );
      }
      return v;
   }

   void enter( Section next, std::string_view header )
   {
      if( static_cast<int>( next ) <= static_cast<int>( section_ ) )
         fail( "section " + std::string( header ) + " out of order" );
      if( next == Section::Columns && !saw_objective_ )
         fail( "ROWS section has no N row" );
      section_ = next;
   }

   void handle( std::string_view line )
   {
      if( line.empty() || line.front() == '*' )
         return;
      const auto tok = tokenize( line );
      if( tok.empty() )
         return;

      if( !std::isspace( static_cast<unsigned char>( line.front() ) ) )
      {
         const std::string_view head = tok[0];
         if( head == "NAME" )
         {
            enter( Section::Name, head );
            if( tok.size() > 1 )
               name_ = std::string( tok[1] );
         }
         else if( head == "OBJSENSE" )
         {
            enter( Section::ObjSense, head );
            if( tok.size() > 1 )
               set_sense( tok[1] );
         }
         else if( head == "ROWS" )
            enter( Section::Rows, head );
         else if( head == "COLUMNS" )
            enter( Section::Columns, head );
         else if( head == "RHS" )
            enter( Section::Rhs, head );
         else if( head == "BOUNDS" )
            enter( Section::Bounds, head );
         else if( head == "ENDATA" )
            enter( Section::End, head );
         else
            fail( "unknown section '" + std::string( head ) + "'" );
         return;
      }

      switch( section_ )
      {
      case Section::ObjSense:
         set_sense( tok[0] );
         break;
      case Section::Rows: row_line( tok ); break;
      case Section::Columns: column_line( tok ); break;
      case Section::Rhs: rhs_line( tok ); break;
      case Section::Bounds: bound_line( tok ); break;
      default: fail( "data line outside a section" );
      }
   }

   void set_sense( std::string_view s )
   {
      if( s == "MAX" || s == "MAXIMIZE" )
         sense_ = ObjSense::Maximize;
      else if( s == "MIN" || s == "MINIMIZE" )
         sense_ = ObjSense::Minimize;
      else
         fail( "unknown objective sense '" + std::string( s ) + "'" );
   }

   void row_line( const std::vector<std::string_view>& tok )
   {
      if( tok.size() != 2 )
         fail( "ROWS entries take a type and a name" );
      const std::string name( tok[1] );
      if( tok[0] == "N" )
      {
         if( saw_objective_ )
            fail( "second N row '" + name + "'" );
         saw_objective_ = true;
         objective_name_ = name;
         return;
      }
      ParsedRow row;
      row.name = name;
      if( tok[0] == "L" )
         row.sense = RowSense::LessEqual;
      else if( tok[0] == "G" )
         row.sense = RowSense::GreaterEqual;
      else if( tok[0] == "E" )
         row.sense = RowSense::Equal;
      else
         fail( "unknown row type '" + std::string( tok[0] ) + "'" );
      if( name == objective_name_ || !row_index_.emplace( name, static_cast<int>( rows_.size() ) ).second )
         fail( "duplicate row '" + name + "'" );
      rows_.push_back( std::move( row ) );
   }

   int row_ref( std::string_view name ) const
   {
      if( name == objective_name_ )
         return -1;
      auto it = row_index_.find( std::string( name ) );
      if( it == row_index_.end() )
         fail( "unknown row '" + std::string( name ) + "'" );
      return it->second;
   }

   ParsedColumn& column_ref( std::string_view name )
   {
      auto it = col_index_.find( std::string( name ) );
      if( it == col_index_.end() )
         fail( "unknown column '" + std::string( name ) + "'" );
      return cols_[it->second];
   }

   void column_line( const std::vector<std::string_view>& tok )
   {
      if( tok.size() == 3 && tok[1] == "'MARKER'" )
      {
         if( tok[2] == "'INTORG'" )
         {
            if( in_integer_ )
               fail( "nested INTORG marker" );
            in_integer_ = true;
         }
         else if( tok[2] == "'INTEND'" )
         {
            if( !in_integer_ )
               fail( "INTEND without INTORG" );
            in_integer_ = false;
         }
         else
            fail( "unknown marker " + std::string( tok[2] ) );
         return;
      }
      if( tok.size() != 3 && tok.size() != 5 )
         fail( "COLUMNS entries take a column and one or two row/value pairs" );

      const std::string name( tok[0] );
      if( cols_.empty() || cols_.back().name != name )
      {
         if( !col_index_.emplace( name, static_cast<int>( cols_.size() ) ).second )
            fail( "column '" + name + "' is not contiguous" );
         ParsedColumn col;
         col.name = name;
         col.integer = in_integer_;
         cols_.push_back( std::move( col ) );
      }
      ParsedColumn& col = cols_.back();
      for( std::size_t k = 1; k + 1 < tok.size(); k += 2 )
         col.entries.emplace_back( row_ref( tok[k] ), number( tok[k + 1] ) );
   }

   void rhs_line( const std::vector<std::string_view>& tok )
   {
      // optional leading set name
      std::size_t k = ( tok.size() % 2 == 1 ) ? 1 : 0;
      if( tok.size() < 2 || tok.size() > 5 )
         fail( "malformed RHS entry" );
      for( ; k + 1 < tok.size(); k += 2 )
      {
         const int r = row_ref( tok[k] );
         const double v = number( tok[k + 1] );
         if( r < 0 )
            obj_constant_ = -v;
         else
            rows_[r].rhs = v;
      }
   }

   void bound_line( const std::vector<std::string_view>& tok )
   {
      const std::string_view type = tok[0];
      const bool valued = type == "UP" || type == "LO" || type == "FX";
      const bool flag = type == "FR" || type == "MI" || type == "PL" || type == "BV";
      if( !valued && !flag )
         fail( "unknown bound type '" + std::string( type ) + "'" );
      const std::size_t with_set = valued ? 4 : 3;
      std::size_t col_tok;
      if( tok.size() == with_set )
         col_tok = 2;
      else if( tok.size() == with_set - 1 )
         col_tok = 1;
      else
         fail( "malformed " + std::string( type ) + " bound" );

      ParsedColumn& col = column_ref( tok[col_tok] );
      const double v = valued ? number( tok[col_tok + 1] ) : 0.0;
      if( type == "UP" )
      {
         col.upper = v;
         col.upper_set = true;
      }
      else if( type == "LO" )
         col.lower = v;
      else if( type == "FX" )
         col.lower = col.upper = v;
      else if( type == "FR" )
      {
         col.lower = -kInf;
         col.upper = kInf;
      }
      else if( type == "MI" )
         col.lower = -kInf;
      else if( type == "PL" )
         col.upper = kInf;
      else
      {
         col.lower = 0.0;
         col.upper = 1.0;
         col.integer = true;
         col.binary_marked = true;
      }
   }

   LinearModel build()
   {
      LinearModel model( name_ );
      for( const ParsedColumn& col : cols_ )
      {
         VarKind kind = VarKind::Continuous;
         if( col.integer )
         {
            double upper = col.upper;
            if( !col.binary_marked && !col.upper_set && std::isinf( upper ) )
               upper = 1.0;
            if( col.lower < 0.0 || upper > 1.0 )
               throw IoError( IoErrc::MpsParse,
                              "integer column '" + col.name + "' is not binary" );
            kind = VarKind::Binary;
            model.add_variable( col.name, col.lower, upper, kind );
         }
         else
            model.add_variable( col.name, col.lower, col.upper, kind );
      }

      std::vector<LinearExpr> exprs( rows_.size() );
      LinearExpr objective( obj_constant_ );
      for( std::size_t j = 0; j < cols_.size(); ++j )
         for( auto [r, v] : cols_[j].entries )
         {
            const VarId id{ static_cast<std::int32_t>( j ) };
            if( r < 0 )
               objective.add( id, v );
            else
               exprs[r].add( id, v );
         }
      for( std::size_t r = 0; r < rows_.size(); ++r )
         model.add_constraint( exprs[r], rows_[r].sense, rows_[r].rhs, rows_[r].name );
      model.set_objective( objective, sense_ );
      return model;
   }

   std::string_view text_;
   int line_no_ = 0;
   Section section_ = Section::None;
   std::string name_;
   ObjSense sense_ = ObjSense::Minimize;
   bool saw_objective_ = false;
   std::string objective_name_;
   double obj_constant_ = 0.0;
   bool in_integer_ = false;
   std::vector<ParsedRow> rows_;
   std::unordered_map<std::string, int> row_index_;
   std::vector<ParsedColumn> cols_;
   std::unordered_map<std::string, int> col_index_;
};

bool
close( double a, double b, double tol )
{
   if( a == b )
      return true;
   if( std::isinf( a ) || std::isinf( b ) )
      return false;
   return std::abs( a - b ) <= tol * std::max( 1.0, std::max( std::abs( a ), std::abs( b ) ) );
}

} // namespace

std::string
sanitize_mps_name( std::string_view name )
{
   std::string out;
   out.reserve( std::min<std::size_t>( name.size(), 255 ) );
   for( char ch : name )
   {
      if( out.size() == 255 )
         break;
      const bool ok = ( ch >= 'A' && ch <= 'Z' ) || ( ch >= 'a' && ch <= 'z' ) ||
                      ( ch >= '0' && ch <= '9' ) || ch == '_';
      out.push_back( ok ? ch : '_' );
   }
   if( out.empty() )
      out = "_";
   return out;
}

std::string
write_mps( const LinearModel& model )
{
   std::vector<std::string> raw_cols, raw_rows;
   for( const Variable& v : model.variables() )
      raw_cols.push_back( v.name );
   for( const Constraint& c : model.constraints() )
      raw_rows.push_back( c.name );
   std::unordered_set<std::string> taken_cols;
   std::unordered_set<std::string> taken_rows{ std::string( kObjRow ) };
   const auto cols = sanitized_unique( raw_cols, "column", taken_cols );
   const auto rows = sanitized_unique( raw_rows, "row", taken_rows );

   // row-wise model to column lists
   std::vector<std::vector<std::pair<int, double>>> by_col( model.num_variables() );
   for( std::size_t i = 0; i < model.num_constraints(); ++i )
   {
      const Constraint& c = model.constraints()[i];
      for( std::size_t k = 0; k < c.cols.size(); ++k )
         by_col[c.cols[k]].emplace_back( static_cast<int>( i ), c.coefs[k] );
   }

   std::ostringstream os;
   os << "NAME " << sanitize_mps_name( model.name() ) << '\n';
   if( model.sense() == ObjSense::Maximize )
      os << "OBJSENSE\n    MAX\n";
   os << "ROWS\n N  " << kObjRow << '\n';
   for( std::size_t i = 0; i < model.num_constraints(); ++i )
      os << ' ' << sense_letter( model.constraints()[i].sense ) << "  " << rows[i] << '\n';

   os << "COLUMNS\n";
   bool in_integer = false;
   int marker = 0;
   for( std::size_t j = 0; j < model.num_variables(); ++j )
   {
      const bool integer = model.variables()[j].kind == VarKind::Binary;
      if( integer != in_integer )
      {
         os << "    MARKER" << marker++ << " 'MARKER' " << ( integer ? "'INTORG'" : "'INTEND'" )
            << '\n';
         in_integer = integer;
      }
      const double c = model.objective().coefficient( VarId{ static_cast<std::int32_t>( j ) } );
      if( c != 0.0 || by_col[j].empty() )
         os << "    " << cols[j] << ' ' << kObjRow << ' ' << format_real( c ) << '\n';
      for( auto [i, a] : by_col[j] )
         os << "    " << cols[j] << ' ' << rows[i] << ' ' << format_real( a ) << '\n';
   }
   if( in_integer )
      os << "    MARKER" << marker++ << " 'MARKER' 'INTEND'\n";

   os << "RHS\n";
   if( model.objective().constant() != 0.0 )
      os << "    RHS " << kObjRow << ' ' << format_real( -model.objective().constant() ) << '\n';
   for( std::size_t i = 0; i < model.num_constraints(); ++i )
      if( model.constraints()[i].rhs != 0.0 )
         os << "    RHS " << rows[i] << ' ' << format_real( model.constraints()[i].rhs ) << '\n';

   os << "BOUNDS\n";
   for( std::size_t j = 0; j < model.num_variables(); ++j )
   {
      const Variable& v = model.variables()[j];
      if( v.kind == VarKind::Binary && v.lower == 0.0 && v.upper == 1.0 )
      {
         os << " BV BND " << cols[j] << '\n';
         continue;
      }
      if( std::isinf( v.lower ) && std::isinf( v.upper ) )
      {
         os << " FR BND " << cols[j] << '\n';
         continue;
      }
      if( std::isinf( v.lower ) )
         os << " MI BND " << cols[j] << '\n';
      else
         os << " LO BND " << cols[j] << ' ' << format_real( v.lower ) << '\n';
      if( std::isfinite( v.upper ) )
         os << " UP BND " << cols[j] << ' ' << format_real( v.upper ) << '\n';
      else if( v.kind == VarKind::Binary )
         os << " PL BND " << cols[j] << '\n';
   }
   os << "ENDATA\n";
   return os.str();
}

LinearModel
read_mps( std::string_view text )
{
   return Parser( text ).run();
}

std::optional<std::string>
compare_models( const LinearModel& a, const LinearModel& b, double tol )
{
   if( a.sense() != b.sense() )
      return "objective sense differs";
   if( a.num_variables() != b.num_variables() )
      return "column count differs";
   if( a.num_constraints() != b.num_constraints() )
      return "row count differs";
   for( std::size_t j = 0; j < a.num_variables(); ++j )
   {
      const Variable& u = a.variables()[j];
      const Variable& v = b.variables()[j];
      if( u.name != v.name )
         return "column " + std::to_string( j ) + " name differs";
      if( u.kind != v.kind )
         return "column " + u.name + " kind differs";
      if( !close( u.lower, v.lower, tol ) || !close( u.upper, v.upper, tol ) )
         return "column " + u.name + " bounds differ";
   }
   for( std::size_t i = 0; i < a.num_constraints(); ++i )
   {
      const Constraint& r = a.constraints()[i];
      const Constraint& s = b.constraints()[i];
      if( r.name != s.name )
         return "row " + std::to_string( i ) + " name differs";
      if( r.sense != s.sense )
         return "row " + r.name + " sense differs";
      if( !close( r.rhs, s.rhs, tol ) )
         return "row " + r.name + " rhs differs";
      if( r.cols != s.cols )
         return "row " + r.name + " sparsity differs";
      for( std::size_t k = 0; k < r.coefs.size(); ++k )
         if( !close( r.coefs[k], s.coefs[k], tol ) )
            return "row " + r.name + " coefficient differs";
   }
   const auto& oa = a.objective().terms();
   const auto& ob = b.objective().terms();
   if( oa.size() != ob.size() )
      return "objective sparsity differs";
   for( auto ia = oa.begin(), ib = ob.begin(); ia != oa.end(); ++ia, ++ib )
      if( ia->first != ib->first || !close( ia->second, ib->second, tol ) )
         return "objective coefficient differs";
   if( !close( a.objective().constant(), b.objective().constant(), tol ) )
      return "objective constant differs";
   return std::nullopt;
}

} // namespace mimf
