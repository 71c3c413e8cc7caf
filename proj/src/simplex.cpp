#include "simplex.hpp"

#include <algorithm>
#include <cmath>

namespace mimf::detail {

namespace {

constexpr double kPrimalTol = 1e-9;
constexpr double kDualTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kResidualTol = 1e-9;
constexpr int kRefactorInterval = 100;

double
nearest_power_of_two( double v )
{
   return std::exp2( std::round( std::log2( v ) ) );
}

} // namespace

bool
BasisFactor::factor( const Eigen::SparseMatrix<double>& basis )
{
   etas_.clear();
   lu_.analyzePattern( basis );
   lu_.factorize( basis );
   return lu_.info() == Eigen::Success;
}

void
BasisFactor::ftran( Eigen::VectorXd& v ) const
{
   v = lu_.solve( v ).eval();
   for( const Eta& e : etas_ )
   {
      const double t = v[e.row] / e.pivot;
      if( t != 0.0 )
         for( std::size_t k = 0; k < e.index.size(); ++k )
            v[e.index[k]] -= e.value[k] * t;
      v[e.row] = t;
   }
}

void
BasisFactor::btran( Eigen::VectorXd& v ) const
{
   for( auto it = etas_.rbegin(); it != etas_.rend(); ++it )
   {
      double sum = v[it->row];
      for( std::size_t k = 0; k < it->index.size(); ++k )
         sum -= it->value[k] * v[it->index[k]];
      v[it->row] = sum / it->pivot;
   }
   v = lu_.transpose().solve( v ).eval();
}

void
BasisFactor::update( int row, const Eigen::VectorXd& alpha )
{
   Eta e;
   e.row = row;
   e.pivot = alpha[row];
   for( int i = 0; i < alpha.size(); ++i )
      if( i != row && alpha[i] != 0.0 )
      {
         e.index.push_back( i );
         e.value.push_back( alpha[i] );
      }
   etas_.push_back( std::move( e ) );
}

BoundedSimplex::BoundedSimplex( const LinearModel& model, const LpOptions& options )
    : options_( options ),
      m_( static_cast<int>( model.num_constraints() ) ),
      n_( static_cast<int>( model.num_variables() ) )
{
   sense_ = model.sense() == ObjSense::Maximize ? -1.0 : 1.0;
   obj_constant_ = model.objective().constant();

   // transpose the row-wise model into columns
   std::vector<int> count( n_ + 1, 0 );
   for( const Constraint& row : model.constraints() )
      for( int col : row.cols )
         ++count[col + 1];
   col_start_.assign( n_ + 1, 0 );
   for( int j = 0; j < n_; ++j )
      col_start_[j + 1] = col_start_[j] + count[j + 1];
   row_index_.resize( col_start_[n_] );
   value_.resize( col_start_[n_] );
   std::vector<int> fill( col_start_.begin(), col_start_.end() - 1 );
   for( int i = 0; i < m_; ++i )
   {
      const Constraint& row = model.constraints()[i];
      for( std::size_t k = 0; k < row.cols.size(); ++k )
      {
         const int slot = fill[row.cols[k]]++;
         row_index_[slot] = i;
         value_[slot] = row.coefs[k];
      }
   }

   orig_lower_.resize( n_ );
   orig_upper_.resize( n_ );
   orig_cost_.assign( n_, 0.0 );
   for( const Variable& v : model.variables() )
   {
      orig_lower_[v.id.index] = v.lower;
      orig_upper_[v.id.index] = v.upper;
   }
   for( auto [col, coef] : model.objective().terms() )
      orig_cost_[col] = coef;

   build_scaling( model );

   const int total = n_ + m_;
   cost_.assign( total, 0.0 );
   lower_.assign( total, 0.0 );
   upper_.assign( total, 0.0 );
   for( int j = 0; j < n_; ++j )
   {
      cost_[j] = sense_ * orig_cost_[j] * col_scale_[j];
      lower_[j] = orig_lower_[j] / col_scale_[j];
      upper_[j] = orig_upper_[j] / col_scale_[j];
   }
   for( int i = 0; i < m_; ++i )
   {
      const Constraint& row = model.constraints()[i];
      const double rhs = -row.rhs * row_scale_[i];
      switch( row.sense )
      {
      case RowSense::LessEqual:
         lower_[n_ + i] = rhs;
         upper_[n_ + i] = kInf;
         break;
      case RowSense::GreaterEqual:
         lower_[n_ + i] = -kInf;
         upper_[n_ + i] = rhs;
         break;
      case RowSense::Equal:
         lower_[n_ + i] = rhs;
         upper_[n_ + i] = rhs;
         break;
      }
   }

   status_.assign( total, Status::AtLower );
   x_.assign( total, 0.0 );
   position_.assign( total, -1 );
   basis_.resize( m_ );
   for( int j = 0; j < n_; ++j )
      place_nonbasic( j );
   for( int i = 0; i < m_; ++i )
   {
      basis_[i] = n_ + i;
      position_[n_ + i] = i;
      status_[n_ + i] = Status::Basic;
   }
   y_.setZero( m_ );
   d_.assign( total, 0.0 );
   phase_cost_.assign( m_, 0.0 );
   refactor();
}

void
BoundedSimplex::build_scaling( const LinearModel& model )
{
   col_scale_.assign( n_, 1.0 );
   row_scale_.assign( m_, 1.0 );
   if( !options_.scale || value_.empty() )
      return;

   // geometric mean scaling: alternate row and column passes
   for( int pass = 0; pass < 6; ++pass )
   {
      std::vector<double> row_min( m_, kInf ), row_max( m_, 0.0 );
      for( int j = 0; j < n_; ++j )
         for( int k = col_start_[j]; k < col_start_[j + 1]; ++k )
         {
            const double a = std::abs( value_[k] ) * row_scale_[row_index_[k]] * col_scale_[j];
            row_min[row_index_[k]] = std::min( row_min[row_index_[k]], a );
            row_max[row_index_[k]] = std::max( row_max[row_index_[k]], a );
         }
      for( int i = 0; i < m_; ++i )
         if( row_max[i] > 0.0 )
            row_scale_[i] /= nearest_power_of_two( std::sqrt( row_min[i] * row_max[i] ) );

      for( int j = 0; j < n_; ++j )
      {
         double lo = kInf, hi = 0.0;
         for( int k = col_start_[j]; k < col_start_[j + 1]; ++k )
         {
            const double a = std::abs( value_[k] ) * row_scale_[row_index_[k]] * col_scale_[j];
            lo = std::min( lo, a );
            hi = std::max( hi, a );
         }
         if( hi > 0.0 )
            col_scale_[j] /= nearest_power_of_two( std::sqrt( lo * hi ) );
      }
   }

   for( int j = 0; j < n_; ++j )
      for( int k = col_start_[j]; k < col_start_[j + 1]; ++k )
         value_[k] *= row_scale_[row_index_[k]] * col_scale_[j];
   (void) model;
}

void
BoundedSimplex::place_nonbasic( int j )
{
   if( std::isfinite( lower_[j] ) )
   {
      status_[j] = Status::AtLower;
      x_[j] = lower_[j];
   }
   else if( std::isfinite( upper_[j] ) )
   {
      status_[j] = Status::AtUpper;
      x_[j] = upper_[j];
   }
   else
   {
      status_[j] = Status::Free;
      x_[j] = 0.0;
   }
}

void
BoundedSimplex::set_column_bounds( int col, double lower, double upper )
{
   lower_[col] = lower / col_scale_[col];
   upper_[col] = upper / col_scale_[col];
   switch( status_[col] )
   {
   case Status::Basic: break;
   case Status::AtLower:
      if( std::isfinite( lower_[col] ) )
         x_[col] = lower_[col];
      else
         place_nonbasic( col );
      break;
   case Status::AtUpper:
      if( std::isfinite( upper_[col] ) )
         x_[col] = upper_[col];
      else
         place_nonbasic( col );
      break;
   case Status::Free: place_nonbasic( col ); break;
   }
   values_dirty_ = true;
}

void
BoundedSimplex::reset_column_bounds( int col )
{
   set_column_bounds( col, orig_lower_[col], orig_upper_[col] );
}

template <typename Fn>
void
BoundedSimplex::for_column( int j, Fn&& fn ) const
{
   if( j >= n_ )
   {
      fn( j - n_, 1.0 );
      return;
   }
   for( int k = col_start_[j]; k < col_start_[j + 1]; ++k )
      fn( row_index_[k], value_[k] );
}

void
BoundedSimplex::compute_column( int q, Eigen::VectorXd& alpha ) const
{
   alpha.setZero( m_ );
   for_column( q, [&]( int row, double a ) { alpha[row] = a; } );
   factor_.ftran( alpha );
}

void
BoundedSimplex::compute_basic_values()
{
   Eigen::VectorXd rhs = Eigen::VectorXd::Zero( m_ );
   for( int j = 0; j < n_ + m_; ++j )
   {
      if( status_[j] == Status::Basic || x_[j] == 0.0 )
         continue;
      const double xj = x_[j];
      for_column( j, [&]( int row, double a ) { rhs[row] -= a * xj; } );
   }
   factor_.ftran( rhs );
   for( int p = 0; p < m_; ++p )
      x_[basis_[p]] = rhs[p];
   values_dirty_ = false;
}

void
BoundedSimplex::compute_duals( bool phase_one )
{
   y_.resize( m_ );
   for( int p = 0; p < m_; ++p )
      y_[p] = phase_one ? phase_cost_[p] : cost_[basis_[p]];
   factor_.btran( y_ );
}

void
BoundedSimplex::compute_reduced_costs( bool phase_one )
{
   for( int j = 0; j < n_ + m_; ++j )
   {
      if( status_[j] == Status::Basic )
      {
         d_[j] = 0.0;
         continue;
      }
      double dj = phase_one ? 0.0 : cost_[j];
      for_column( j, [&]( int row, double a ) { dj -= y_[row] * a; } );
      d_[j] = dj;
   }
}

bool
BoundedSimplex::collect_infeasible()
{
   bool any = false;
   for( int p = 0; p < m_; ++p )
   {
      const int j = basis_[p];
      if( x_[j] < lower_[j] - kPrimalTol )
      {
         phase_cost_[p] = -1.0;
         any = true;
      }
      else if( x_[j] > upper_[j] + kPrimalTol )
      {
         phase_cost_[p] = 1.0;
         any = true;
      }
      else
         phase_cost_[p] = 0.0;
   }
   return any;
}

double
BoundedSimplex::basic_residual() const
{
   std::vector<double> r( m_, 0.0 );
   for( int j = 0; j < n_ + m_; ++j )
   {
      const double xj = x_[j];
      if( xj != 0.0 )
         for_column( j, [&]( int row, double a ) { r[row] += a * xj; } );
   }
   double worst = 0.0;
   for( double v : r )
      worst = std::max( worst, std::abs( v ) );
   return worst;
}

void
BoundedSimplex::refactor()
{
   std::vector<Eigen::Triplet<double>> entries;
   for( int p = 0; p < m_; ++p )
      for_column( basis_[p], [&]( int row, double a ) { entries.emplace_back( row, p, a ); } );
   Eigen::SparseMatrix<double> basis( m_, m_ );
   basis.setFromTriplets( entries.begin(), entries.end() );
   basis.makeCompressed();
   if( !factor_.factor( basis ) )
   {
      repair_singular_basis();
      refactor();
      return;
   }
   compute_basic_values();
}

void
BoundedSimplex::repair_singular_basis()
{
   // Only the structural block on rows without a basic logical can be
   // singular; swap its dependent columns for logicals of uncovered rows.
   std::vector<int> struct_pos;
   std::vector<char> row_covered( m_, 0 );
   for( int p = 0; p < m_; ++p )
   {
      if( basis_[p] >= n_ )
         row_covered[basis_[p] - n_] = 1;
      else
         struct_pos.push_back( p );
   }
   std::vector<int> free_rows;
   std::vector<int> row_slot( m_, -1 );
   for( int i = 0; i < m_; ++i )
      if( !row_covered[i] )
      {
         row_slot[i] = static_cast<int>( free_rows.size() );
         free_rows.push_back( i );
      }

   const int k = static_cast<int>( struct_pos.size() );
   Eigen::MatrixXd block = Eigen::MatrixXd::Zero( k, k );
   for( int c = 0; c < k; ++c )
      for_column( basis_[struct_pos[c]], [&]( int row, double a ) {
         if( row_slot[row] >= 0 )
            block( row_slot[row], c ) = a;
      } );

   Eigen::FullPivLU<Eigen::MatrixXd> full( block );
   full.setThreshold( 1e-11 );
   int rank = static_cast<int>( full.rank() );
   if( rank == k )
      rank = k - 1; // sparse LU disagreed; drop the weakest column anyway
   const auto& colp = full.permutationQ().indices();
   const auto& rowp = full.permutationP().indices();
   for( int t = rank; t < k; ++t )
   {
      const int pos = struct_pos[colp[t]];
      int row = -1;
      for( int r = 0; r < k; ++r )
         if( rowp[r] == t )
            row = free_rows[r];
      const int leaving = basis_[pos];
      position_[leaving] = -1;
      place_nonbasic( leaving );
      basis_[pos] = n_ + row;
      position_[n_ + row] = pos;
      status_[n_ + row] = Status::Basic;
   }
   values_dirty_ = true;
}

void
BoundedSimplex::row_of_inverse( int row, Eigen::VectorXd& rho ) const
{
   rho.setZero( m_ );
   rho[row] = 1.0;
   factor_.btran( rho );
}

int
BoundedSimplex::choose_entering( bool bland ) const
{
   int best = -1;
   double best_score = 0.0;
   for( int j = 0; j < n_ + m_; ++j )
   {
      double score = 0.0;
      switch( status_[j] )
      {
      case Status::Basic: continue;
      case Status::AtLower:
         if( upper_[j] > lower_[j] && d_[j] < -kDualTol )
            score = -d_[j];
         break;
      case Status::AtUpper:
         if( upper_[j] > lower_[j] && d_[j] > kDualTol )
            score = d_[j];
         break;
      case Status::Free:
         if( std::abs( d_[j] ) > kDualTol )
            score = std::abs( d_[j] );
         break;
      }
      if( score <= 0.0 )
         continue;
      if( bland )
         return j;
      if( score > best_score )
      {
         best_score = score;
         best = j;
      }
   }
   return best;
}

BoundedSimplex::RatioResult
BoundedSimplex::ratio_test( int q, int dir, const Eigen::VectorXd& alpha, bool bland ) const
{
   // x_B moves by -dir * alpha * t
   struct Candidate {
      int pos;
      double exact;
      double relaxed;
      bool to_upper;
   };
   std::vector<Candidate> cands;
   for( int p = 0; p < m_; ++p )
   {
      const double a = alpha[p];
      if( std::abs( a ) < kPivotTol )
         continue;
      const int j = basis_[p];
      const double rate = -dir * a;
      const double xj = x_[j];
      if( rate < 0.0 )
      {
         if( xj > upper_[j] + kPrimalTol )
            cands.push_back( { p, ( xj - upper_[j] ) / -rate, ( xj - upper_[j] ) / -rate, true } );
         else if( xj >= lower_[j] - kPrimalTol && std::isfinite( lower_[j] ) )
            cands.push_back( { p, std::max( 0.0, xj - lower_[j] ) / -rate,
                               ( xj - lower_[j] + kPrimalTol ) / -rate, false } );
      }
      else
      {
         if( xj < lower_[j] - kPrimalTol )
            cands.push_back( { p, ( lower_[j] - xj ) / rate, ( lower_[j] - xj ) / rate, false } );
         else if( xj <= upper_[j] + kPrimalTol && std::isfinite( upper_[j] ) )
            cands.push_back( { p, std::max( 0.0, upper_[j] - xj ) / rate,
                               ( upper_[j] - xj + kPrimalTol ) / rate, true } );
      }
   }

   const double range = upper_[q] - lower_[q];
   RatioResult result;

   if( cands.empty() )
   {
      if( std::isfinite( range ) && status_[q] != Status::Free )
      {
         result.flip = true;
         result.step = range;
      }
      return result;
   }

   int chosen = -1;
   if( bland )
   {
      double best = kInf;
      for( const Candidate& c : cands )
         best = std::min( best, c.exact );
      for( int c = 0; c < static_cast<int>( cands.size() ); ++c )
         if( cands[c].exact <= best + 1e-12 &&
             ( chosen < 0 || basis_[cands[c].pos] < basis_[cands[chosen].pos] ) )
            chosen = c;
   }
   else
   {
      double bound = kInf;
      for( const Candidate& c : cands )
         bound = std::min( bound, c.relaxed );
      double best_pivot = 0.0;
      for( int c = 0; c < static_cast<int>( cands.size() ); ++c )
      {
         if( cands[c].exact > bound )
            continue;
         const double piv = std::abs( alpha[cands[c].pos] );
         if( piv > best_pivot )
         {
            best_pivot = piv;
            chosen = c;
         }
      }
   }

   const double step = cands[chosen].exact;
   if( std::isfinite( range ) && status_[q] != Status::Free && range <= step )
   {
      result.flip = true;
      result.step = range;
      return result;
   }
   result.row = cands[chosen].pos;
   result.step = step;
   result.to_upper = cands[chosen].to_upper;
   return result;
}

void
BoundedSimplex::pivot( int row, int entering, const Eigen::VectorXd& alpha )
{
   factor_.update( row, alpha );
   const int leaving = basis_[row];
   position_[leaving] = -1;
   basis_[row] = entering;
   position_[entering] = row;
   status_[entering] = Status::Basic;
}

SolveStatus
BoundedSimplex::solve()
{
   const std::int64_t limit = options_.iteration_limit > 0
                                  ? options_.iteration_limit
                                  : 100 * static_cast<std::int64_t>( m_ + n_ );
   std::int64_t iters = 0;
   int degenerate = 0;
   bool bland = false;
   bool fresh_phase_two = false;
   bool verified = false;
   Eigen::VectorXd alpha( m_ );

   if( values_dirty_ )
      compute_basic_values();

   while( true )
   {
      const bool phase_one = collect_infeasible();
      if( phase_one )
      {
         compute_duals( true );
         fresh_phase_two = false;
      }
      else if( !fresh_phase_two )
      {
         compute_duals( false );
         fresh_phase_two = true;
      }
      compute_reduced_costs( phase_one );

      const int q = choose_entering( bland );
      if( q < 0 )
      {
         // confirm with a clean basic solution before reporting
         if( !verified && factor_.updates() > 0 )
         {
            compute_basic_values();
            if( basic_residual() > kResidualTol )
               refactor();
            fresh_phase_two = false;
            verified = true;
            continue;
         }
         total_iterations_ += iters;
         dual_ready_ = !phase_one;
         return phase_one ? SolveStatus::Infeasible : SolveStatus::Optimal;
      }
      verified = false;

      if( iters >= limit )
      {
         total_iterations_ += iters;
         return SolveStatus::IterLimit;
      }
      ++iters;

      int dir;
      if( status_[q] == Status::AtLower )
         dir = 1;
      else if( status_[q] == Status::AtUpper )
         dir = -1;
      else
         dir = d_[q] < 0.0 ? 1 : -1;

      compute_column( q, alpha );
      const RatioResult ratio = ratio_test( q, dir, alpha, bland );

      if( ratio.row < 0 && !ratio.flip )
      {
         if( factor_.updates() > 0 )
         {
            refactor();
            fresh_phase_two = false;
            continue;
         }
         total_iterations_ += iters;
         return phase_one ? SolveStatus::Infeasible : SolveStatus::Unbounded;
      }

      const double t = ratio.step;
      if( t > 0.0 )
      {
         for( int p = 0; p < m_; ++p )
            if( alpha[p] != 0.0 )
               x_[basis_[p]] -= dir * t * alpha[p];
      }
      x_[q] += dir * t;

      if( t <= 1e-12 )
      {
         if( ++degenerate >= options_.bland_after_degenerate )
            bland = true;
      }
      else
      {
         degenerate = 0;
         bland = false;
      }

      if( ratio.flip )
      {
         status_[q] = dir > 0 ? Status::AtUpper : Status::AtLower;
         x_[q] = dir > 0 ? upper_[q] : lower_[q];
         continue;
      }

      const int leaving = basis_[ratio.row];
      pivot( ratio.row, q, alpha );
      fresh_phase_two = false;
      status_[leaving] = ratio.to_upper ? Status::AtUpper : Status::AtLower;
      x_[leaving] = ratio.to_upper ? upper_[leaving] : lower_[leaving];
      if( !std::isfinite( x_[leaving] ) )
         place_nonbasic( leaving );

      if( factor_.updates() >= kRefactorInterval )
      {
         refactor();
         fresh_phase_two = false;
      }
   }
}

bool
BoundedSimplex::align_nonbasics_with_duals()
{
   for( int j = 0; j < n_ + m_; ++j )
   {
      if( status_[j] == Status::Basic )
         continue;
      const bool has_lower = std::isfinite( lower_[j] );
      const bool has_upper = std::isfinite( upper_[j] );
      if( has_lower && has_upper && lower_[j] == upper_[j] )
      {
         status_[j] = Status::AtLower;
         x_[j] = lower_[j];
      }
      else if( d_[j] > kDualTol )
      {
         if( !has_lower )
            return false;
         status_[j] = Status::AtLower;
         x_[j] = lower_[j];
      }
      else if( d_[j] < -kDualTol )
      {
         if( !has_upper )
            return false;
         status_[j] = Status::AtUpper;
         x_[j] = upper_[j];
      }
      else if( ( status_[j] == Status::AtLower && !has_lower ) ||
               ( status_[j] == Status::AtUpper && !has_upper ) || status_[j] == Status::Free )
         place_nonbasic( j );
   }
   return true;
}

int
BoundedSimplex::choose_leaving() const
{
   int best = -1;
   double worst = kPrimalTol;
   for( int p = 0; p < m_; ++p )
   {
      const int j = basis_[p];
      const double viol = std::max( lower_[j] - x_[j], x_[j] - upper_[j] );
      if( viol > worst )
      {
         worst = viol;
         best = p;
      }
   }
   return best;
}

SolveStatus
BoundedSimplex::solve_dual()
{
   if( !dual_ready_ )
      return solve();
   dual_ready_ = false;

   compute_duals( false );
   compute_reduced_costs( false );
   if( !align_nonbasics_with_duals() )
      return solve();
   compute_basic_values();

   const std::int64_t limit = options_.iteration_limit > 0
                                  ? options_.iteration_limit
                                  : 100 * static_cast<std::int64_t>( m_ + n_ );
   std::int64_t iters = 0;
   Eigen::VectorXd alpha( m_ );
   Eigen::VectorXd rho( m_ );
   std::vector<double> alpha_row( n_ + m_, 0.0 );

   while( true )
   {
      const int r = choose_leaving();
      if( r < 0 )
         break;
      if( iters >= limit )
      {
         total_iterations_ += iters;
         return solve();
      }
      ++iters;

      const int leaving = basis_[r];
      const bool to_lower = x_[leaving] < lower_[leaving];
      const double target = to_lower ? lower_[leaving] : upper_[leaving];

      // row r of B^-1 [A I] over nonbasic columns
      row_of_inverse( r, rho );
      for( int j = 0; j < n_ + m_; ++j )
      {
         if( status_[j] == Status::Basic )
         {
            alpha_row[j] = 0.0;
            continue;
         }
         double a = 0.0;
         for_column( j, [&]( int row, double v ) { a += rho[row] * v; } );
         alpha_row[j] = a;
      }

      // x_r moves by -alpha_rj * dx_j; it must rise when below its lower bound
      const double want = to_lower ? -1.0 : 1.0;
      double bound = kInf;
      for( int j = 0; j < n_ + m_; ++j )
      {
         const double a = alpha_row[j] * want;
         if( status_[j] == Status::Basic || std::abs( a ) < kPivotTol )
            continue;
         const bool fixed = lower_[j] == upper_[j];
         if( fixed )
            continue;
         const bool eligible = ( status_[j] == Status::AtLower && a > 0.0 ) ||
                               ( status_[j] == Status::AtUpper && a < 0.0 ) ||
                               status_[j] == Status::Free;
         if( eligible )
            bound = std::min( bound, ( std::abs( d_[j] ) + kDualTol ) / std::abs( a ) );
      }
      int q = -1;
      double best_pivot = 0.0;
      if( std::isfinite( bound ) )
         for( int j = 0; j < n_ + m_; ++j )
         {
            const double a = alpha_row[j] * want;
            if( status_[j] == Status::Basic || std::abs( a ) < kPivotTol || lower_[j] == upper_[j] )
               continue;
            const bool eligible = ( status_[j] == Status::AtLower && a > 0.0 ) ||
                                  ( status_[j] == Status::AtUpper && a < 0.0 ) ||
                                  status_[j] == Status::Free;
            if( eligible && std::abs( d_[j] ) / std::abs( a ) <= bound &&
                std::abs( a ) > best_pivot )
            {
               best_pivot = std::abs( a );
               q = j;
            }
         }

      if( q < 0 )
      {
         if( factor_.updates() > 0 )
         {
            refactor();
            compute_duals( false );
            compute_reduced_costs( false );
            continue;
         }
         total_iterations_ += iters;
         return SolveStatus::Infeasible;
      }

      compute_column( q, alpha );
      const double step = ( x_[leaving] - target ) / alpha[r];
      for( int p = 0; p < m_; ++p )
         if( alpha[p] != 0.0 )
            x_[basis_[p]] -= alpha[p] * step;
      x_[q] += step;

      // reduced costs follow the pivot row
      const double theta = d_[q] / alpha_row[q];
      for( int j = 0; j < n_ + m_; ++j )
         if( status_[j] != Status::Basic && alpha_row[j] != 0.0 )
            d_[j] -= theta * alpha_row[j];
      d_[q] = 0.0;
      d_[leaving] = -theta;

      pivot( r, q, alpha );
      status_[leaving] = to_lower ? Status::AtLower : Status::AtUpper;
      x_[leaving] = target;

      if( factor_.updates() >= kRefactorInterval )
      {
         refactor();
         compute_duals( false );
         compute_reduced_costs( false );
      }
   }

   total_iterations_ += iters;
   // primal pass confirms optimality and repairs any drift
   return solve();
}

std::vector<std::uint8_t>
BoundedSimplex::save_basis() const
{
   std::vector<std::uint8_t> saved( status_.size() );
   for( std::size_t j = 0; j < status_.size(); ++j )
      saved[j] = static_cast<std::uint8_t>( status_[j] );
   return saved;
}

void
BoundedSimplex::load_basis( const std::vector<std::uint8_t>& saved )
{
   int p = 0;
   for( int j = 0; j < n_ + m_; ++j )
   {
      status_[j] = static_cast<Status>( saved[j] );
      if( status_[j] == Status::Basic )
      {
         basis_[p] = j;
         position_[j] = p++;
         continue;
      }
      position_[j] = -1;
      if( status_[j] == Status::AtLower && std::isfinite( lower_[j] ) )
         x_[j] = lower_[j];
      else if( status_[j] == Status::AtUpper && std::isfinite( upper_[j] ) )
         x_[j] = upper_[j];
      else
         place_nonbasic( j );
   }
   refactor();
   dual_ready_ = true;
}

double
BoundedSimplex::objective() const
{
   double value = obj_constant_;
   for( int j = 0; j < n_; ++j )
      value += orig_cost_[j] * x_[j] * col_scale_[j];
   return value;
}

std::vector<double>
BoundedSimplex::primal() const
{
   std::vector<double> point( n_ );
   for( int j = 0; j < n_; ++j )
   {
      double v = x_[j] * col_scale_[j];
      // snap basics that sit within round-off of a bound
      v = std::clamp( v, orig_lower_[j], orig_upper_[j] );
      point[j] = v;
   }
   return point;
}

void
BoundedSimplex::duals( std::vector<double>& row_duals, std::vector<double>& reduced_costs )
{
   compute_duals( false );
   row_duals.resize( m_ );
   reduced_costs.resize( n_ );
   // d'_j = s_j (c_j - sum_i (y'_i r_i) a_ij), in the internal minimisation sense
   for( int i = 0; i < m_; ++i )
      row_duals[i] = sense_ * y_[i] * row_scale_[i];
   for( int j = 0; j < n_; ++j )
   {
      double dj = orig_cost_[j];
      for( int k = col_start_[j]; k < col_start_[j + 1]; ++k )
         dj -= row_duals[row_index_[k]] * value_[k] / ( row_scale_[row_index_[k]] * col_scale_[j] );
      reduced_costs[j] = dj;
   }
}

} // namespace mimf::detail
