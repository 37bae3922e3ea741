// Discrete Gaussians over Z and over lattices (randomized nearest plane).
// Width convention: rho_{s,c}(x) = exp(-pi |x - c|^2 / s^2), so the standard
// deviation is s / sqrt(2 pi).
#pragma once

#include <string>
#include <vector>

#include "lpe/gso.hpp"
#include "lpe/rng.hpp"

namespace lpe {

struct GaussParam {
  double sigma;
  double tail_cut = 12.0;

  GaussParam(double s, double t = 12.0);
};

i64 sample_z(double center, const GaussParam& p, RngStream& rng);

// gs_norm * sqrt(ln(2 dim + 4) / pi): the smallest accepted lattice width.
double sigma_floor(double gs_norm, std::size_t dim);

// Throws InvalidArgument below the floor; reports a warning below twice it.
void check_sigma(double sigma, double gs_norm, std::size_t dim);

using WarningHandler = void (*)(const std::string&);
void set_warning_handler(WarningHandler h);
void warn(const std::string& msg);

// Klein's sampler on the first `r` levels. On entry d[j] is the center's
// coefficient along b~_j; levels r-1..0 are sampled in turn, writing z[j] and
// leaving d[j] as the center at the time level j was sampled.
void klein_levels(const GramSchmidtData& g, std::size_t r, double sigma, double tail_cut, std::vector<double>& d,
                  std::vector<i64>& z, RngStream& rng);

// Lattice point from D_{L(ob), sigma, center}, without the width check.
IntVector klein_point(const OrthoBasis& ob, double sigma, double tail_cut, const std::vector<double>& center,
                      RngStream& rng);

// Lattice point from D_{L(ob), sigma, center}.
IntVector sample_gpv(const OrthoBasis& ob, const GaussParam& p, const std::vector<double>& center, RngStream& rng);

}  // namespace lpe
