#pragma once

#include <complex>
#include <iosfwd>
#include <map>

#include "anisoframe/index_geometry.hpp"

namespace anisoframe {

using Complex = std::complex<double>;

// Finitely supported coefficient sequence, iterated in the ShearIndex total order.
using CoeffSeq = std::map<ShearIndex, Complex>;

IndexSet support_of(const CoeffSeq& c);
CoeffSeq restrict_to(const CoeffSeq& c, const IndexSet& gamma);

// One index per line followed by real and imaginary parts with 17 significant digits.
void write_coeff_seq(std::ostream& os, const CoeffSeq& c);
CoeffSeq read_coeff_seq(std::istream& is);

}  // namespace anisoframe
