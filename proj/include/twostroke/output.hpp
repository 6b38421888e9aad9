#pragma once

#include <string>

namespace twostroke {

// Fixed 12-significant-digit rendering used by every CSV/JSON emitter.
std::string format_number(double x);

// x rounded to 12 significant digits, so JSON serialization prints the same
// digits as format_number.
double round_significant(double x);

}  // namespace twostroke
