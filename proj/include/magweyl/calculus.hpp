#ifndef MAGWEYL_CALCULUS_HPP
#define MAGWEYL_CALCULUS_HPP

#include "magweyl/magfield.hpp"
#include "magweyl/phasespace.hpp"

namespace magweyl {

// Dense operator on WaveFunction samples. Integral-kernel operators carry
// the position quadrature weight folded into the entries (M = dx^N K), so
// composition is plain matrix multiplication, the Hilbert-Schmidt norm is
// the Frobenius norm, and the integral trace is the matrix trace.
struct OperatorMatrix {
  GridPtr grid;
  Eigen::MatrixXcd M;

  OperatorMatrix() = default;
  explicit OperatorMatrix(GridPtr g)
      : grid(std::move(g)), M(Eigen::MatrixXcd::Zero(grid->posCount(), grid->posCount())) {}
};

OperatorMatrix identity_op(const GridPtr& g);
WaveFunction apply(const OperatorMatrix& T, const WaveFunction& u);
OperatorMatrix adjoint(const OperatorMatrix& T);
OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator*(cplx s, const OperatorMatrix& a);
double hs_norm(const OperatorMatrix& T);
cplx hs_inner(const OperatorMatrix& a, const OperatorMatrix& b);  // Tr(a* b)
cplx op_trace(const OperatorMatrix& T);
// Rank-one |u><v| as a weight-folded kernel operator.
OperatorMatrix outer(const WaveFunction& u, const WaveFunction& v);

// The Weyl-system operator op^A(Y), Y = (y, eta) with y on-grid:
//   [op^A(Y)u](x) = e^{-i(x+y/2).eta} e^{-i Gamma^A([x, x+y])} u(x+y).
// Stored as a phase-permutation: row j reads phase[j] * u[dst[j]].
struct WeylPhase {
  GridPtr grid;
  std::vector<int> dst;
  std::vector<cplx> phase;
};

WeylPhase weyl_phase(const PotentialSpec& A, const GridPtr& g, const PhasePoint& Y);
OperatorMatrix weyl_system(const PotentialSpec& A, const GridPtr& g, const PhasePoint& Y);
OperatorMatrix to_matrix(const WeylPhase& P);
// Tr(P.C), O(m). C in the folded-kernel convention.
cplx trace_times(const WeylPhase& P, const Eigen::MatrixXcd& C);
Eigen::MatrixXcd times(const WeylPhase& P, const Eigen::MatrixXcd& C);   // P.C
Eigen::MatrixXcd times(const Eigen::MatrixXcd& C, const WeylPhase& P);   // C.P

// Magnetic Weyl quantization and its exact inverse on the discrete model.
OperatorMatrix op_weyl(const PotentialSpec& A, const Symbol& f);
Symbol symbol_of(const PotentialSpec& A, const OperatorMatrix& T);

// Magnetic Moyal product, literal double phase-space quadrature (the
// fidelity oracle; full-grid mode is only sensible on small grids).
Symbol moyal_direct(const Symbol& f, const Symbol& g, const FieldSpec& B);
std::vector<cplx> moyal_direct_points(const Symbol& f, const Symbol& g, const FieldSpec& B,
                                      const std::vector<int>& xiIndices);

// Production path: symbol_of(A, op_weyl(A,f) op_weyl(A,g)).
Symbol moyal_kernel_route(const Symbol& f, const Symbol& g, const PotentialSpec& A);

// Independent composition oracles via twisted convolution on the
// symplectic Fourier side (B = 0 and z-independent constant-field cases).
Symbol weyl_compose_b0(const Symbol& f, const Symbol& g);
Symbol weyl_compose_const_b(const Symbol& f, const Symbol& g, double b);

// Magnetic Wigner-type transform: the symbol with op_weyl(A, .) = |u><v|,
//   (z,zeta) -> int dy e^{i y.zeta} gamma^A(z+y/2, z-y/2) u(z-y/2) conj v(z+y/2),
// gamma^A(a,b) = e^{-i Gamma^A([a,b])}; computed by the direct integral
// (half-step interpolation in y), independently of symbol_of.
Symbol wigner(const PotentialSpec& A, const WaveFunction& u, const WaveFunction& v);

// Magnetic phase-space translations (kernel route).
Symbol mag_translate(const PhasePoint& Z, const Symbol& f, const PotentialSpec& A);
Symbol mag_translate_pair(const PhasePoint& Y, const PhasePoint& Z, const Symbol& f,
                          const PotentialSpec& A);

// Mixed product (F * g)(x, xi) = int d eta F(x, xi - eta) g(x, eta),
// circular convolution over the momentum grid.
Symbol mixed_product(const Symbol& F, const Symbol& g);

// Explicit translation route: Omega-tilde_P[z] * translate(Z, f).
Symbol mag_translate_explicit(const PhasePoint& Z, const Symbol& f, const FieldSpec& B);

}  // namespace magweyl

#endif
