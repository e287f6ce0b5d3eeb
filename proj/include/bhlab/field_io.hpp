#pragma once

#include <string>

#include "bhlab/field.hpp"

namespace bhlab::io {

// locale-independent decimal serialization at 17 significant digits
// (lossless double round trip)
std::string format_double(double v);
double parse_double(const std::string& s);

// field file v1:
//   # bh-field v1 n=<n> L=<L>
//   <n lines of decimal values>
void write_field_file(const std::string& path, const RealField& f);
RealField read_field_file(const std::string& path);

} // namespace bhlab::io
