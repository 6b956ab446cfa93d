#ifndef MAGWEYL_BARGMANN_HPP
#define MAGWEYL_BARGMANN_HPP

#include "magweyl/modulation.hpp"

namespace magweyl {

// Phase-space Bargmann-type transform attached to a window vector, and the
// induced covariant representation of phase-space kernels.  Integrals over
// the transform side use the self-dual Haar measure dX / (2pi)^N, matching
// the modulation layer.

// Gauge dressing: [dress(A,v)](x) = e^{i Gamma^A([0,x])} v(x).  Dressed
// windows make the magnetic Wigner symbol of |w><w| depend on the field
// only, not on the chosen potential.
WaveFunction dressed_window(const PotentialSpec& A, const WaveFunction& v);

// Default window pi^{-N/4} e^{-|x|^2/2}, renormalized to unit grid norm.
WaveFunction gaussian_window(const GridPtr& g);

// Coherent state at label Y: op^A(Y) applied to the dressed window.  The
// explicit variant evaluates the same vector by a closed one-line formula
// (half-step linear phase, two circulations, periodic sample lookup) as an
// independent code path.
WaveFunction coherent_state(const PotentialSpec& A, const WaveFunction& v,
                            const PhasePoint& Y);
WaveFunction coherent_state_explicit(const PotentialSpec& A, const WaveFunction& v,
                                     const PhasePoint& Y);

// Function on the phase-space grid Xi, measured with dX / (2pi)^N.
struct BargmannFunction {
  GridPtr grid;
  std::vector<cplx> v;

  BargmannFunction() = default;
  explicit BargmannFunction(GridPtr g)
      : grid(std::move(g)), v(grid->xiCount(), cplx{0.0, 0.0}) {}
};

cplx bargmann_inner(const BargmannFunction& a, const BargmannFunction& b);
double bargmann_norm(const BargmannFunction& a);
BargmannFunction operator-(const BargmannFunction& a, const BargmannFunction& b);

// The transform U u(X) = <v^A(X), u> for the coherent family
// v^A(X) = op^A(X) w, w the normalized dressed window.  Its adjoint is
// U* Phi = int dmu(X) Phi(X) v^A(X); U* U = 1 holds exactly on the grid
// (a unitary twirl), so U is an isometry onto its range and U U* is the
// orthogonal projection onto that range, with reproducing kernel
// K(X, Y) = <v^A(X), v^A(Y)>.
class BargmannTransform {
 public:
  BargmannTransform(const PotentialSpec& A, const WaveFunction& v);

  const GridPtr& grid() const { return g_; }
  const PotentialSpec& potential() const { return A_; }
  const WaveFunction& window() const { return w_; }

  WaveFunction state(const PhasePoint& X) const;  // v^A(X)
  BargmannFunction forward(const WaveFunction& u) const;
  WaveFunction adjoint(const BargmannFunction& Phi) const;
  BargmannFunction project(const BargmannFunction& Phi) const;  // U U*
  cplx kernel(const PhasePoint& X, const PhasePoint& Y) const;

 private:
  GridPtr g_;
  PotentialSpec A_;
  WaveFunction w_;
};

// Magnetic Wigner symbol of |w><w|, w the normalized dressed window; an
// idempotent of the magnetic composition law that depends on the field
// only (gauge independence is exact on the grid).
Symbol wigner_window(const PotentialSpec& A, const WaveFunction& v);

// Diagonal coherent matrix element <v^A(Z), Op^A(f) v^A(Z)>; a state on
// symbols, covariant under the magnetic phase-space translations.
cplx coherent_functional(const PotentialSpec& A, const WaveFunction& v,
                         const PhasePoint& Z, const Symbol& f);

// Covariant representation of two-variable kernels on transform-side
// functions: [rep_apply(F) Phi](X) = int dmu(Y) F(X, X - Y) Phi(Y).
// It sends the discrete convolution unit to the identity and is a
// homomorphism for the crossed product.  The generic overload runs the
// literal quadrature (cost xiCount^2 evaluations of F; small grids);
// the ModulationMap overload is the O(m^3) operator fast path for
// kernels of the form M_h(f), and satisfies
//   rep_apply(M_h(f)) Phi = U Op^A(f) U* Phi
// up to band-edge transport defects (exact for fluxes commensurate with
// the cell).
BargmannFunction rep_apply(const DoubleSymbol& F, const BargmannFunction& Phi);
BargmannFunction rep_apply(const ModulationMap& M, const BargmannFunction& Phi);

// The discrete convolution unit in the second slot: rep_apply of it is
// the identity map.
DoubleSymbol rep_unit(const GridPtr& g);

// Kohn-Nirenberg-type symbol: the symplectic Fourier transform in the
// second slot, K(X, W) = (2pi)^-N int dY e^{i sigma(W, Y)} F(X, Y).
// rep_apply(kohn_nirenberg(A)) realizes the composition rep o (1 x F),
// a pseudodifferential (Kohn-Nirenberg) calculus on the transform side.
DoubleSymbol kohn_nirenberg(const DoubleSymbol& F);

}  // namespace magweyl

#endif
