#ifndef MAGWEYL_MAGFIELD_HPP
#define MAGWEYL_MAGFIELD_HPP

#include <array>
#include <string>
#include <vector>

#include "magweyl/phasespace.hpp"

namespace magweyl {

using Point = std::array<double, 2>;

// Gauss-Legendre rule on [-1, 1].
struct QuadRule {
  std::vector<double> x, w;
};
const QuadRule& gauss_legendre(int n);

// Closed-form magnetic field. For N=2 the single independent component is
// B12; N=1 forces the zero field.
struct FieldSpec {
  enum class Kind { Zero, Constant, Linear, Bump };
  int N = 2;
  Kind kind = Kind::Zero;
  double b = 0.0;                    // Constant: B12 = b; Bump: amplitude
  std::array<double, 2> grad{0, 0};  // Linear: B12 = b + grad.x
  double sigma = 1.0;                // Bump width
  Point center{0.0, 0.0};            // Bump center

  static FieldSpec zero(int N = 2) { return {N, Kind::Zero, 0.0, {0, 0}, 1.0, {0, 0}}; }
  static FieldSpec constant(double b) { return {2, Kind::Constant, b, {0, 0}, 1.0, {0, 0}}; }
  static FieldSpec linear(double b0, double g1, double g2) { return {2, Kind::Linear, b0, {g1, g2}, 1.0, {0, 0}}; }
  static FieldSpec bump(double amp, double sigma, Point c) { return {2, Kind::Bump, amp, {0, 0}, sigma, c}; }

  double B12(const Point& x) const;
  // Component B_jk with antisymmetry built in (j, k in {0, 1}).
  double component(int j, int k, const Point& x) const;
  bool polynomial() const { return kind != Kind::Bump; }
};

// Quadratic gauge scalar rho(x) = c0 + c.x + q11 x1^2 + q12 x1 x2 + q22 x2^2,
// with exact gradient. Additive, so composed gauge shifts stay exact.
struct RhoSpec {
  double c0 = 0.0;
  std::array<double, 2> c{0.0, 0.0};
  double q11 = 0.0, q12 = 0.0, q22 = 0.0;

  double operator()(const Point& x) const;
  Point grad(const Point& x) const;
  RhoSpec operator+(const RhoSpec& o) const;
  bool trivial() const;
};

// Vector potential A with dA = B, plus an optional gauge scalar (A + d rho).
struct PotentialSpec {
  enum class Gauge { Zero, Symmetric, Landau, Transversal };
  int N = 2;
  Gauge gauge = Gauge::Zero;
  FieldSpec field;  // the field this potential realizes (ignored for Zero)
  RhoSpec rho;

  static PotentialSpec zero(int N = 2);
  static PotentialSpec symmetric(double b);  // A = (-b x2/2, b x1/2)
  static PotentialSpec landau(double b);     // A = (-b x2, 0)

  Point eval(const Point& x) const;   // includes d rho
  FieldSpec fieldOf() const;          // dA (gauge-scalar part drops out)
};

// A_j(x) = -sum_k int_0^1 s B_jk(s x) x_k ds; satisfies dA = B.
PotentialSpec transversal_gauge(const FieldSpec& B);

PotentialSpec gauge_shift(const PotentialSpec& A, const RhoSpec& rho);

// Flux of B through the oriented 2-simplex <a, b, c>.
double flux_triangle(const FieldSpec& B, const Point& a, const Point& b, const Point& c);

// Circulation int_[x,y] A along the straight segment traversed x -> y.
// The d rho contribution is rho(y) - rho(x), exactly.
double circulation(const PotentialSpec& A, const Point& x, const Point& y);

// omega^B(X,Y;z) = exp[-i flux<z, z+x, z+x+y>].
cplx omega_cocycle(const FieldSpec& B, const PhasePoint& X, const PhasePoint& Y, const Point& z);
// Omega^B(X,Y;z) = exp[(i/2) sigma(X,Y)] omega^B(X,Y;z).
cplx big_omega_cocycle(const FieldSpec& B, const PhasePoint& X, const PhasePoint& Y, const Point& z);

// Flux through the parallelogram P(x; y, z):
//   sum_{j,k} y_j z_k int_{-1/2}^{1/2} ds int_{-1}^{0} dt B_jk(x + s y + t z).
double flux_parallelogram(const FieldSpec& B, const Point& x, const Point& y, const Point& z);

// Partial Fourier transform in y of Omega^B_P[z](x, y) = exp(+i flux P(x;y,z))
// (the orientation that matches the Weyl-system cocycle conventions):
//   (x, xi) -> (2pi)^-N sum_y wX e^{-i y.xi} Omega^B_P[z](x, y),
// sampled on the grid. For B = 0 this has unit momentum-quadrature mass at
// xi = 0 and vanishes elsewhere.
Symbol omega_tilde_P(const GridPtr& g, const FieldSpec& B, const Point& z);

// Config-schema serialization (kind tags + numeric parameters).
std::string field_to_config(const FieldSpec& B);
FieldSpec field_from_config(const std::string& json);
std::string potential_to_config(const PotentialSpec& A);
PotentialSpec potential_from_config(const std::string& json);

}  // namespace magweyl

#endif
