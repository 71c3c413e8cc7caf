#include "mimf/random.hpp"

#include <cmath>
#include <numbers>

namespace mimf {

Xorshift64Star::Xorshift64Star( std::uint64_t seed )
{
   std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL;
   z = ( z ^ ( z >> 30 ) ) * 0xBF58476D1CE4E5B9ULL;
   z = ( z ^ ( z >> 27 ) ) * 0x94D049BB133111EBULL;
   z ^= z >> 31;
   state_ = z != 0 ? z : 0x9E3779B97F4A7C15ULL;
}

std::uint64_t
Xorshift64Star::next()
{
   state_ ^= state_ >> 12;
   state_ ^= state_ << 25;
   state_ ^= state_ >> 27;
   return state_ * 0x2545F4914F6CDD1DULL;
}

double
Xorshift64Star::uniform_open()
{
   // long double carries the full 64-bit numerator; the final rounding to
   // double can land on 0 or 1 only at the extreme draws, which are nudged
   // back inside.
   const long double num = static_cast<long double>( next() ) + 1.0L;
   const long double den = 18446744073709551616.0L + 2.0L;
   double u = static_cast<double>( num / den );
   if( u <= 0.0 )
      u = std::nextafter( 0.0, 1.0 );
   if( u >= 1.0 )
      u = std::nextafter( 1.0, 0.0 );
   return u;
}

double
Xorshift64Star::normal()
{
   const double u1 = uniform_open();
   const double u2 = uniform_open();
   return std::sqrt( -2.0 * std::log( u1 ) ) * std::cos( 2.0 * std::numbers::pi * u2 );
}

std::vector<double>
Xorshift64Star::unit_vector( std::size_t dim )
{
   std::vector<double> v( dim );
   double norm = 0.0;
   do
   {
      norm = 0.0;
      for( double& c : v )
      {
         c = normal();
         norm += c * c;
      }
   } while( norm == 0.0 );
   norm = std::sqrt( norm );
   for( double& c : v )
      c /= norm;
   return v;
}

} // namespace mimf
