#ifndef MAGWEYL_MODULATION_HPP
#define MAGWEYL_MODULATION_HPP

#include "magweyl/calculus.hpp"

namespace magweyl {

// Integrals over Xi in this layer use the self-dual Haar measure
// dX / (2pi)^N, under which the plane-wave completeness relation
// int dmu(Z) <f, e_Z><e_{-Z}, g> = <f, g>_mu holds with constant one and
// the modulation-mapping identities below are constant-free.
double haar_weight(const GridPtr& g);                // wXi / (2pi)^N
cplx pair_haar(const Symbol& f, const Symbol& g);    // (2pi)^-N int f g
// <<F, G>>_mu on the common dense coarse grid of F and G.
cplx pair_haar_double(const DoubleSymbol& F, const DoubleSymbol& G);

// Pairing-trace constant: <f, g> = kappa Tr(Op^A(f) Op^A(g)) (plain
// measure). Calibrated once per grid on a fixed fixture pair, then frozen.
double calibrate_kappa(const PotentialSpec& A, const GridPtr& g);

// Tr(P1 C1 P2 C2) for phase-permutation P1, P2 and dense C1, C2; O(m^2).
cplx trace_phase_sandwich(const WeylPhase& P1, const Eigen::MatrixXcd& C1,
                          const WeylPhase& P2, const Eigen::MatrixXcd& C2);

// Operator-route evaluator of the magnetic modulation mapping
//   [M^B_h(f)](X, Y) = <e_{-X} #^B f #^B e_{X-Y}, h>_mu
//                    = (2pi)^-N kappa Tr(op^A(-X) Op^A(f) op^A(X-Y) Op^A(h)).
class ModulationMap {
 public:
  ModulationMap(Symbol h, Symbol f, const PotentialSpec& A);

  const GridPtr& grid() const { return g_; }
  const PotentialSpec& potential() const { return A_; }
  const OperatorMatrix& opF() const { return F_; }
  const OperatorMatrix& opH() const { return H_; }
  double kappa() const { return kappa_; }

  // Position parts of X and Y must be on-grid.
  cplx at(const PhasePoint& X, const PhasePoint& Y) const;
  // at(X, Z) for every fine Xi grid point Z (Z = xiPoint(i)).
  std::vector<cplx> row(const PhasePoint& X) const;

  DoubleSymbol lazy() const;
  DoubleSymbol dense(int stride) const;

 private:
  GridPtr g_;
  PotentialSpec A_;
  OperatorMatrix F_, H_;
  double kappa_;
};

// (M_h(f) <> M_k(g))(X, Y) with the exact full-grid Z quadrature, via the
// operator fast path (substitution Z -> W = X - Z moves both factors into
// single-phase traces).
cplx crossed_at(const ModulationMap& MF, const ModulationMap& MG,
                const PhasePoint& X, const PhasePoint& Y);

// Crossed product (F <> G)(X,Y) = int dmu(Z) F(X,Z) G(X-Z, Y-Z), quadrature
// over the fine Xi grid (lazy; cost per point = xiCount evaluations of each
// factor). Involution F*(X,Y) = conj F(X-Y, -Y).
DoubleSymbol crossed_product(const DoubleSymbol& F, const DoubleSymbol& G);
DoubleSymbol crossed_involution(const DoubleSymbol& F);

// Adjoint: (M^B_h)*(G) = int int dmu(X) dmu(Y) G(X,Y) e_X #^B h #^B e_{Y-X},
// quadrature over the dense coarse grid of G.
Symbol modulation_adjoint(const Symbol& h, const DoubleSymbol& G,
                          const PotentialSpec& A);

// Simple tensors and the box product:
//   J_h(f) = f (x) h,   [J_h^*(F)](X) = <F(X, .), h>_mu,
//   (f (x) h) box (g (x) k) = (f #^B g) (x) (k #^B h).
DoubleSymbol j_embed(const Symbol& f, const Symbol& h);
Symbol j_adjoint(const Symbol& h, const DoubleSymbol& F);
DoubleSymbol box_product(const Symbol& f, const Symbol& h, const Symbol& g,
                         const Symbol& k, const PotentialSpec& A);

// The idempotent window with Op^A(h) = |w><w| (requires <w,w> = 1), via the
// exact discrete inverse of the quantization; satisfies h #^B h = h to
// roundoff.
Symbol idempotent_window(const PotentialSpec& A, const WaveFunction& w);

// Cyclicity / completeness / translation-integral identities:
//   (a) <f1 #^B f2, f3> = <f1, f2 #^B f3> = <f2, f3 #^B f1>
//   (b) int dmu(Z) <f, e_Z>_mu <e_{-Z}, g>_mu = <f, g>_mu
//       (plain-measure constant (2pi)^{2N}, reported in b_constant)
//   (c) int int dmu(Y) dmu(Z) [Theta^B_Z f](Y) g(Y) = (int_mu f)(int_mu g)
struct LemmaResiduals {
  double a = 0.0, b = 0.0, c = 0.0;
  double b_constant = 0.0;  // measured plain-measure constant in (b)
};
LemmaResiduals lemma_identities(const PotentialSpec& A, const Symbol& f1,
                                const Symbol& f2, const Symbol& f3);

}  // namespace magweyl

#endif
