#pragma once

#include <iosfwd>
#include <string>

#include "caplp/field.hpp"

namespace caplp {

/// Field CSV layout:
///   Nbeta,Nphi,theta
///   <Nbeta>,<Nphi>,<theta>
///   one line per grid row (cell rows, then the rim ring), n_phi values each.
/// Numbers are written with 17 significant digits, which round-trips doubles exactly.
void write_field_csv(std::ostream& os, const CapField& s);
void write_field_csv(const std::string& path, const CapField& s);

/// Throws std::runtime_error on malformed input.
CapField read_field_csv(std::istream& is);
CapField read_field_csv(const std::string& path);

/// Formats a double with 17 significant digits.
std::string format_double(double x);

}  // namespace caplp
