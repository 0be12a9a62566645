#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "caplp/field.hpp"
#include "caplp/field_io.hpp"

using namespace caplp;

TEST(FieldIo, RoundTripIsBitExact) {
  const GridPtr g = make_grid(16, 32, std::numbers::pi / 3);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  std::vector<double> v(g->size());
  for (double& x : v) x = u(rng) * std::pow(10.0, static_cast<int>(rng() % 20) - 10);
  v[0] = 1.0 / 3.0;
  v[1] = -0.0;
  const CapField s(g, v);
  std::stringstream ss;
  write_field_csv(ss, s);
  const CapField r = read_field_csv(ss);
  ASSERT_TRUE(r.grid().same_layout(s.grid()));
  for (std::size_t n = 0; n < g->size(); ++n) EXPECT_EQ(r[n], s[n]);
}

TEST(FieldIo, HeaderCarriesGrid) {
  const GridPtr g = make_grid(8, 16, 0.5);
  std::stringstream ss;
  write_field_csv(ss, CapField::constant(g, 1.0));
  std::string line;
  std::getline(ss, line);
  EXPECT_EQ(line, "Nbeta,Nphi,theta");
  std::getline(ss, line);
  EXPECT_EQ(line.substr(0, 5), "8,16,");
}

TEST(FieldIo, RejectsMalformedInput) {
  std::stringstream bad1("Nbeta,Nphi,theta\n8,16,0.5\n1,2,3\n");
  EXPECT_THROW(read_field_csv(bad1), std::runtime_error);
  std::stringstream bad2("hello\n");
  EXPECT_THROW(read_field_csv(bad2), std::runtime_error);
  std::stringstream bad3("Nbeta,Nphi,theta\n8,15,0.5\n");
  EXPECT_THROW(read_field_csv(bad3), std::exception);
  EXPECT_THROW(read_field_csv(std::string("/nonexistent/field.csv")), std::runtime_error);
}

TEST(FieldIo, FormatDouble) {
  EXPECT_EQ(std::stod(format_double(0.1)), 0.1);
  EXPECT_EQ(std::stod(format_double(1e-300)), 1e-300);
}
