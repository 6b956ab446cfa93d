#ifndef MAGWEYL_PHASESPACE_HPP
#define MAGWEYL_PHASESPACE_HPP

#include <array>
#include <complex>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace magweyl {

using cplx = std::complex<double>;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

// A point X = (x, xi) of phase space, dimension 1 or 2.
struct PhasePoint {
  int dim = 2;
  std::array<double, 2> x{0.0, 0.0};
  std::array<double, 2> xi{0.0, 0.0};

  PhasePoint() = default;
  PhasePoint(double x0, double xi0) : dim(1), x{x0, 0.0}, xi{xi0, 0.0} {}
  PhasePoint(double x0, double x1, double xi0, double xi1) : dim(2), x{x0, x1}, xi{xi0, xi1} {}

  PhasePoint operator+(const PhasePoint& o) const;
  PhasePoint operator-(const PhasePoint& o) const;
  PhasePoint operator-() const;
};

// Symplectic form sigma(X, Y) = y.xi - x.eta.
double sigma(const PhasePoint& X, const PhasePoint& Y);

// Uniform periodic discretization of the box [-L, L)^N together with the
// reciprocal momentum grid [-n pi/(2L), n pi/(2L))^N, step pi/L.
class PhaseGrid {
 public:
  PhaseGrid(int N, int n, double L);

  int N() const { return N_; }
  int n() const { return n_; }
  double L() const { return L_; }
  double dx() const { return dx_; }
  double dxi() const { return dxi_; }

  int posCount() const { return posCount_; }   // n^N
  int momCount() const { return posCount_; }   // n^N (same cardinality)
  int xiCount() const { return posCount_ * posCount_; }

  double xpos(int j) const { return -L_ + j * dx_; }
  double xmom(int k) const { return (k - n_ / 2) * dxi_; }

  // Quadrature weights.
  double wX() const { return wX_; }            // dx^N
  double wMom() const { return wMom_; }        // dxi^N
  double wXi() const { return wX_ * wMom_; }

  // Multi-index helpers; axis 0 is the slowest index.
  std::array<int, 2> decode(int flat) const;
  int encode(const std::array<int, 2>& idx) const;

  PhasePoint point(int posIdx, int momIdx) const;
  PhasePoint xiPoint(int xiIdx) const { return point(xiIdx / posCount_, xiIdx % posCount_); }

  // Steps of an on-grid coordinate; throws if off-grid beyond tol.
  int posSteps(double coord, double tol = 1e-9) const;
  int momSteps(double coord, double tol = 1e-9) const;
  // Shifted flat index with periodic wraparound.
  int shiftPos(int posIdx, const std::array<int, 2>& steps) const;
  int shiftMom(int momIdx, const std::array<int, 2>& steps) const;

  // Trigonometric interpolation of one position axis onto the half-step
  // grid of 2n points x_p = -L + p dx/2 (spectrum window [-n/2, n/2)).
  const Eigen::MatrixXcd& halfStepInterp() const { return halfInterp_; }

 private:
  int N_, n_;
  double L_, dx_, dxi_, wX_, wMom_;
  int posCount_;
  Eigen::MatrixXcd halfInterp_;
};

using GridPtr = std::shared_ptr<const PhaseGrid>;

GridPtr make_grid(int N, int n, double L);

// Complex samples on the Xi grid, layout [pos axes..., mom axes...].
struct Symbol {
  GridPtr grid;
  std::vector<cplx> v;

  Symbol() = default;
  explicit Symbol(GridPtr g) : grid(std::move(g)), v(grid->xiCount(), cplx{0.0, 0.0}) {}

  cplx& at(int posIdx, int momIdx) { return v[static_cast<std::size_t>(posIdx) * grid->momCount() + momIdx]; }
  cplx at(int posIdx, int momIdx) const { return v[static_cast<std::size_t>(posIdx) * grid->momCount() + momIdx]; }
};

// Complex samples on the X grid.
struct WaveFunction {
  GridPtr grid;
  std::vector<cplx> v;

  WaveFunction() = default;
  explicit WaveFunction(GridPtr g) : grid(std::move(g)), v(grid->posCount(), cplx{0.0, 0.0}) {}
};

Symbol make_symbol(const GridPtr& g, const std::function<cplx(const PhasePoint&)>& f);
WaveFunction make_wavefunction(const GridPtr& g, const std::function<cplx(const std::array<double, 2>&)>& f);

// Plane wave e_X(Z) = exp(-i sigma(X, Z)).
cplx plane_wave_at(const PhasePoint& X, const PhasePoint& Z);
Symbol plane_wave(const GridPtr& g, const PhasePoint& X);

// Bilinear pairing <f, g> = int f g (no conjugation), by grid quadrature.
cplx pair_bilinear(const Symbol& f, const Symbol& g);
// Sesquilinear pairing int conj(f) g.
cplx pair_sesqui(const Symbol& f, const Symbol& g);
double norm_l2(const Symbol& f);

cplx inner(const WaveFunction& u, const WaveFunction& w);  // int conj(u) w
double norm_l2(const WaveFunction& u);

// Symplectic Fourier transform: (Ff)(X) = (2pi)^-N int dY e^{i sigma(X,Y)} f(Y).
// Involutive; f(Y) = (2pi)^-N int dX (Ff)(X) e_X(Y).
Symbol symplectic_fourier(const Symbol& f);

// Projection removing spectral components whose step is -n/2 in any axis
// (the unpaired band-edge frequency of an even grid).  On the complement,
// pointwise conjugation of a symbol corresponds exactly to reflection of
// its spectral coefficients, which several trace/pairing identities need.
Symbol nyquist_free(const Symbol& f);

// [translate(Z, f)](X) = f(X - Z), Z on-grid, periodic wraparound.
Symbol translate(const PhasePoint& Z, const Symbol& f);

Symbol conj(const Symbol& f);
Symbol operator+(const Symbol& a, const Symbol& b);
Symbol operator-(const Symbol& a, const Symbol& b);
Symbol operator*(cplx s, const Symbol& a);

WaveFunction operator+(const WaveFunction& a, const WaveFunction& b);
WaveFunction operator-(const WaveFunction& a, const WaveFunction& b);
WaveFunction operator*(cplx s, const WaveFunction& a);

// Band-limited (trigonometric) extension of a Symbol, evaluable at
// arbitrary phase-space points consistent with the periodic model.
class TrigInterpolant {
 public:
  explicit TrigInterpolant(const Symbol& f);
  cplx operator()(const PhasePoint& Z) const;

 private:
  GridPtr grid_;
  std::vector<cplx> coeff_;  // layout like Symbol, centered frequency windows
};

// Coarse sub-lattice of the Xi grid (every stride-th point per axis).
class CoarseXiGrid {
 public:
  CoarseXiGrid(GridPtr g, int stride);

  int perAxis() const { return c_; }
  int count() const { return count_; }          // c^{2N}
  double weight() const { return w_; }          // quadrature weight per point
  PhasePoint point(int i) const;
  int fineXiIndex(int i) const;                 // index into the fine Xi grid
  const GridPtr& fine() const { return grid_; }

 private:
  GridPtr grid_;
  int stride_, c_, count_;
  double w_;
};

// Function on Xi x Xi: lazy evaluator, optionally materialized densely on
// a coarse product grid.
struct DoubleSymbol {
  GridPtr grid;
  std::function<cplx(const PhasePoint&, const PhasePoint&)> eval;
  std::shared_ptr<CoarseXiGrid> coarse;  // set when dense
  std::vector<cplx> dense;               // count*count values, X-major

  cplx operator()(const PhasePoint& X, const PhasePoint& Y) const { return eval(X, Y); }
};

DoubleSymbol materialize(const GridPtr& g, int stride,
                         const std::function<cplx(const PhasePoint&, const PhasePoint&)>& f);

// <<F, G>> = int int F G over the coarse product grid of F (both dense,
// same coarse grid).
cplx pair_bilinear_double(const DoubleSymbol& F, const DoubleSymbol& G);

}  // namespace magweyl

#endif
