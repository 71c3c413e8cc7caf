#pragma once

#include <cstdint>
#include <vector>

namespace mimf {

/// xorshift64* generator (Vigna 2014). The seed is passed through one
/// splitmix64 step so that seed 0 yields a valid nonzero state.
class Xorshift64Star
{
 public:
   explicit Xorshift64Star( std::uint64_t seed );

   std::uint64_t next();

   /// (v + 1) / (2^64 + 2), which lies strictly inside (0, 1).
   double uniform_open();

   /// Standard normal by Box-Muller on two open-interval draws.
   double normal();

   /// Uniform direction on the unit sphere in `dim` dimensions.
   std::vector<double> unit_vector( std::size_t dim );

 private:
   std::uint64_t state_;
};

} // namespace mimf
