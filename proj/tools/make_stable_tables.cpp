// Regenerates include/gazewalk/stable_tables.hpp.
//
// For every (alpha, beta) grid cell this draws a large seeded sample from the
// standard S0 stable law and records the quantile spreads the McCulloch-style
// estimator inverts. Seeds are fixed per cell, so the output is reproducible.
//
// Usage: make_stable_tables [output_path] [draws_per_cell]

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "gazewalk/rng.hpp"
#include "gazewalk/stable.hpp"

namespace {

struct CellStats {
  double nu_alpha, nu_beta, nu_c, nu_zeta;
};

double order_stat(std::vector<double>& v, double p) {
  // Type-7 quantile via two nth_element passes.
  const double h = (static_cast<double>(v.size()) - 1.0) * p;
  const std::size_t lo = static_cast<std::size_t>(h);
  std::nth_element(v.begin(), v.begin() + lo, v.end());
  const double a = v[lo];
  if (lo + 1 >= v.size()) return a;
  std::nth_element(v.begin() + lo + 1, v.begin() + lo + 1, v.end());
  const double b = v[lo + 1];
  return a + (h - lo) * (b - a);
}

CellStats measure_cell(double alpha, double beta, std::size_t n,
                       std::uint64_t seed) {
  gazewalk::Rng rng(seed);
  std::vector<double> draws(n);
  for (std::size_t i = 0; i < n; ++i)
    draws[i] = gazewalk::detail::cms_standard(alpha, beta, rng);

  const double q05 = order_stat(draws, 0.05);
  const double q25 = order_stat(draws, 0.25);
  const double q50 = order_stat(draws, 0.50);
  const double q75 = order_stat(draws, 0.75);
  const double q95 = order_stat(draws, 0.95);

  CellStats s;
  s.nu_alpha = (q95 - q05) / (q75 - q25);
  s.nu_beta = (q95 + q05 - 2.0 * q50) / (q95 - q05);
  s.nu_c = q75 - q25;
  s.nu_zeta = -q50;
  return s;
}

void print_table(std::FILE* f, const char* name,
                 const std::vector<std::vector<double>>& t) {
  std::fprintf(f, "inline constexpr double %s[kAlphaCount][kBetaCount] = {\n",
               name);
  for (const auto& row : t) {
    std::fprintf(f, "    {");
    for (std::size_t j = 0; j < row.size(); ++j)
      std::fprintf(f, "%s%.6f", j ? ", " : "", row[j]);
    std::fprintf(f, "},\n");
  }
  std::fprintf(f, "};\n\n");
}

}  // namespace

int main(int argc, char** argv) {
  const std::string out_path =
      argc > 1 ? argv[1] : "include/gazewalk/stable_tables.hpp";
  const std::size_t n = argc > 2 ? std::stoull(argv[2]) : 8000000;

  std::vector<double> alphas;
  for (int i = 0; i <= 30; ++i) alphas.push_back(0.50 + 0.05 * i);
  const std::vector<double> betas = {0.0, 0.25, 0.5, 0.75, 1.0};

  const std::size_t na = alphas.size(), nb = betas.size();
  std::vector tab_a(na, std::vector<double>(nb));
  std::vector tab_b(na, std::vector<double>(nb));
  std::vector tab_c(na, std::vector<double>(nb));
  std::vector tab_z(na, std::vector<double>(nb));

  for (std::size_t i = 0; i < na; ++i) {
    for (std::size_t j = 0; j < nb; ++j) {
      const std::uint64_t seed = 0x5EED0000u + i * 100 + j;
      const CellStats s = measure_cell(alphas[i], betas[j], n, seed);
      tab_a[i][j] = s.nu_alpha;
      tab_b[i][j] = s.nu_beta;
      tab_c[i][j] = s.nu_c;
      tab_z[i][j] = s.nu_zeta;
    }
    std::fprintf(stderr, "alpha=%.2f done\n", alphas[i]);
  }

  // Symmetric laws have exactly zero skew statistics; pin them to kill
  // Monte Carlo noise in the beta=0 column.
  for (std::size_t i = 0; i < na; ++i) {
    tab_b[i][0] = 0.0;
    tab_z[i][0] = 0.0;
  }

  std::FILE* f = std::fopen(out_path.c_str(), "w");
  if (!f) {
    std::fprintf(stderr, "cannot open %s\n", out_path.c_str());
    return 1;
  }
  std::fprintf(f, "#pragma once\n\n");
  std::fprintf(f,
               "// Generated by tools/make_stable_tables.cpp -- do not edit "
               "by hand.\n// Quantile spreads of the standard S0 stable law, "
               "%zu draws per cell.\n\n",
               n);
  std::fprintf(f, "namespace gazewalk::stable_tables {\n\n");
  std::fprintf(f, "inline constexpr unsigned kAlphaCount = %zu;\n", na);
  std::fprintf(f, "inline constexpr unsigned kBetaCount = %zu;\n\n", nb);

  std::fprintf(f, "inline constexpr double kAlphaGrid[kAlphaCount] = {\n    ");
  for (std::size_t i = 0; i < na; ++i)
    std::fprintf(f, "%s%.2f", i ? (i % 10 ? ", " : ",\n    ") : "", alphas[i]);
  std::fprintf(f, "};\n\n");

  std::fprintf(f, "inline constexpr double kBetaGrid[kBetaCount] = {");
  for (std::size_t j = 0; j < nb; ++j)
    std::fprintf(f, "%s%.2f", j ? ", " : "", betas[j]);
  std::fprintf(f, "};\n\n");

  print_table(f, "kNuAlpha", tab_a);
  print_table(f, "kNuBeta", tab_b);
  print_table(f, "kNuC", tab_c);
  print_table(f, "kNuZeta", tab_z);
  std::fprintf(f, "}  // namespace gazewalk::stable_tables\n");
  std::fclose(f);
  std::fprintf(stderr, "wrote %s\n", out_path.c_str());
  return 0;
}
