#include "caplp/field_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace caplp {

namespace {

std::vector<double> parse_row(const std::string& line, std::size_t line_no) {
  std::vector<double> out;
  const char* p = line.data();
  const char* end = line.data() + line.size();
  while (p < end) {
    while (p < end && (*p == ' ' || *p == '\t')) ++p;
    double v = 0.0;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc()) {
      throw std::runtime_error("field csv: bad number on line " + std::to_string(line_no));
    }
    out.push_back(v);
    p = next;
    while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
    if (p < end) {
      if (*p != ',') throw std::runtime_error("field csv: expected ',' on line " + std::to_string(line_no));
      ++p;
    }
  }
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_field_csv(std::ostream& os, const CapField& s) {
  const CapGrid& g = s.grid();
  os << "Nbeta,Nphi,theta\n";
  os << g.n_beta() << ',' << g.n_phi() << ',' << format_double(g.theta()) << '\n';
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = 0; j < g.n_phi(); ++j) {
      if (j) os << ',';
      os << format_double(s(i, j));
    }
    os << '\n';
  }
}

void write_field_csv(const std::string& path, const CapField& s) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_field_csv(os, s);
}

CapField read_field_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("Nbeta,Nphi,theta", 0) != 0) {
    throw std::runtime_error("field csv: missing 'Nbeta,Nphi,theta' header");
  }
  if (!std::getline(is, line)) throw std::runtime_error("field csv: missing grid line");
  const auto head = parse_row(line, 2);
  if (head.size() != 3) throw std::runtime_error("field csv: grid line needs 3 values");
  const int nb = static_cast<int>(head[0]);
  const int np = static_cast<int>(head[1]);
  if (nb != head[0] || np != head[1]) throw std::runtime_error("field csv: non-integer grid size");
  GridPtr grid;
  try {
    grid = make_grid(nb, np, head[2]);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("field csv: ") + e.what());
  }
  std::vector<double> values;
  values.reserve(grid->size());
  std::size_t line_no = 2;
  for (int i = 0; i < grid->rows(); ++i) {
    ++line_no;
    if (!std::getline(is, line)) throw std::runtime_error("field csv: truncated at row " + std::to_string(i));
    const auto row = parse_row(line, line_no);
    if (static_cast<int>(row.size()) != np) {
      throw std::runtime_error("field csv: row " + std::to_string(i) + " has " +
                               std::to_string(row.size()) + " values, expected " + std::to_string(np));
    }
    values.insert(values.end(), row.begin(), row.end());
  }
  return CapField(grid, std::move(values));
}

CapField read_field_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_field_csv(is);
}

}  // namespace caplp
