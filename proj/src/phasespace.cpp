#include "magweyl/phasespace.hpp"

#include <cmath>

#include "magweyl/kernels.hpp"

namespace magweyl {

PhasePoint PhasePoint::operator+(const PhasePoint& o) const {
  PhasePoint r = *this;
  for (int a = 0; a < dim; ++a) {
    r.x[a] += o.x[a];
    r.xi[a] += o.xi[a];
  }
  return r;
}

PhasePoint PhasePoint::operator-(const PhasePoint& o) const {
  PhasePoint r = *this;
  for (int a = 0; a < dim; ++a) {
    r.x[a] -= o.x[a];
    r.xi[a] -= o.xi[a];
  }
  return r;
}

PhasePoint PhasePoint::operator-() const {
  PhasePoint r = *this;
  for (int a = 0; a < dim; ++a) {
    r.x[a] = -r.x[a];
    r.xi[a] = -r.xi[a];
  }
  return r;
}

double sigma(const PhasePoint& X, const PhasePoint& Y) {
  double s = 0.0;
  for (int a = 0; a < X.dim; ++a) s += Y.x[a] * X.xi[a] - X.x[a] * Y.xi[a];
  return s;
}

PhaseGrid::PhaseGrid(int N, int n, double L) : N_(N), n_(n), L_(L) {
  if (N != 1 && N != 2) throw std::invalid_argument("PhaseGrid: N must be 1 or 2");
  if (n < 4 || n % 2 != 0 || n > 32) throw std::invalid_argument("PhaseGrid: n must be even, 4..32");
  if (L <= 0.0) throw std::invalid_argument("PhaseGrid: L must be positive");
  dx_ = 2.0 * L / n;
  dxi_ = kPi / L;
  posCount_ = 1;
  for (int a = 0; a < N; ++a) posCount_ *= n;
  wX_ = std::pow(dx_, N);
  wMom_ = std::pow(dxi_, N);

  // Half-step trig interpolation matrix. The Nyquist mode is split evenly
  // between +-n/2 (cosine form), which keeps the matrix real so that the
  // symbol <-> kernel map commutes with complex conjugation exactly.
  halfInterp_.resize(2 * n, n);
  for (int p = 0; p < 2 * n; ++p) {
    for (int j = 0; j < n; ++j) {
      double th = kPi * p / n - 2.0 * kPi * j / n;
      double s = std::cos(n / 2 * th);
      for (int k = -n / 2 + 1; k < n / 2; ++k) s += std::cos(k * th);
      halfInterp_(p, j) = s / n;
    }
  }
}

std::array<int, 2> PhaseGrid::decode(int flat) const {
  if (N_ == 1) return {flat, 0};
  return {flat / n_, flat % n_};
}

int PhaseGrid::encode(const std::array<int, 2>& idx) const {
  if (N_ == 1) return idx[0];
  return idx[0] * n_ + idx[1];
}

PhasePoint PhaseGrid::point(int posIdx, int momIdx) const {
  auto pj = decode(posIdx);
  auto mk = decode(momIdx);
  PhasePoint Z;
  Z.dim = N_;
  for (int a = 0; a < N_; ++a) {
    Z.x[a] = xpos(pj[a]);
    Z.xi[a] = xmom(mk[a]);
  }
  return Z;
}

int PhaseGrid::posSteps(double coord, double tol) const {
  double s = coord / dx_;
  double r = std::round(s);
  if (std::abs(s - r) > tol) throw std::invalid_argument("PhaseGrid: coordinate not on position grid");
  return static_cast<int>(r);
}

int PhaseGrid::momSteps(double coord, double tol) const {
  double s = coord / dxi_;
  double r = std::round(s);
  if (std::abs(s - r) > tol) throw std::invalid_argument("PhaseGrid: coordinate not on momentum grid");
  return static_cast<int>(r);
}

static int wrap(int i, int n) {
  i %= n;
  return i < 0 ? i + n : i;
}

int PhaseGrid::shiftPos(int posIdx, const std::array<int, 2>& steps) const {
  auto idx = decode(posIdx);
  for (int a = 0; a < N_; ++a) idx[a] = wrap(idx[a] + steps[a], n_);
  return encode(idx);
}

int PhaseGrid::shiftMom(int momIdx, const std::array<int, 2>& steps) const {
  return shiftPos(momIdx, steps);
}

GridPtr make_grid(int N, int n, double L) { return std::make_shared<PhaseGrid>(N, n, L); }

Symbol make_symbol(const GridPtr& g, const std::function<cplx(const PhasePoint&)>& f) {
  Symbol s(g);
  const int m = g->posCount();
  for (int p = 0; p < m; ++p)
    for (int k = 0; k < m; ++k) s.at(p, k) = f(g->point(p, k));
  return s;
}

WaveFunction make_wavefunction(const GridPtr& g, const std::function<cplx(const std::array<double, 2>&)>& f) {
  WaveFunction u(g);
  for (int p = 0; p < g->posCount(); ++p) {
    auto idx = g->decode(p);
    std::array<double, 2> x{g->xpos(idx[0]), g->N() == 2 ? g->xpos(idx[1]) : 0.0};
    u.v[p] = f(x);
  }
  return u;
}

cplx plane_wave_at(const PhasePoint& X, const PhasePoint& Z) {
  double th = -sigma(X, Z);
  return {std::cos(th), std::sin(th)};
}

Symbol plane_wave(const GridPtr& g, const PhasePoint& X) {
  return make_symbol(g, [&X](const PhasePoint& Z) { return plane_wave_at(X, Z); });
}

cplx pair_bilinear(const Symbol& f, const Symbol& g) {
  return f.grid->wXi() * kernels::dot(f.v.data(), g.v.data(), f.v.size());
}

cplx pair_sesqui(const Symbol& f, const Symbol& g) {
  return f.grid->wXi() * kernels::dotc(f.v.data(), g.v.data(), f.v.size());
}

double norm_l2(const Symbol& f) { return std::sqrt(std::abs(pair_sesqui(f, f))); }

cplx inner(const WaveFunction& u, const WaveFunction& w) {
  return u.grid->wX() * kernels::dotc(u.v.data(), w.v.data(), u.v.size());
}

double norm_l2(const WaveFunction& u) { return std::sqrt(std::abs(inner(u, u))); }

// Apply an n x n matrix along one axis of a rank-(2N) tensor with all axes
// of length n, axis 0 slowest.
static void apply_axis(std::vector<cplx>& data, const Eigen::MatrixXcd& M, int axis, int nAxes, int n) {
  std::size_t inner = 1;
  for (int a = axis + 1; a < nAxes; ++a) inner *= n;
  std::size_t outer = data.size() / (inner * n);
  std::vector<cplx> slice(n), out(n);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < inner; ++i) {
      std::size_t base = o * inner * n + i;
      for (int j = 0; j < n; ++j) slice[j] = data[base + j * inner];
      for (int r = 0; r < n; ++r) {
        cplx acc{0.0, 0.0};
        for (int j = 0; j < n; ++j) acc += M(r, j) * slice[j];
        out[r] = acc;
      }
      for (int r = 0; r < n; ++r) data[base + r * inner] = out[r];
    }
  }
}

Symbol symplectic_fourier(const Symbol& f) {
  const auto& g = *f.grid;
  const int N = g.N(), n = g.n();
  // (Ff)(x, xi) = (2pi)^-N sum_{y,eta} w e^{i y.xi} e^{-i x.eta} f(y, eta).
  Eigen::MatrixXcd Dy(n, n), De(n, n);
  for (int r = 0; r < n; ++r)
    for (int j = 0; j < n; ++j) {
      double tp = g.xpos(j) * g.xmom(r);   // y_j * xi_r
      double tm = -g.xpos(r) * g.xmom(j);  // -x_r * eta_j
      Dy(r, j) = cplx{std::cos(tp), std::sin(tp)};
      De(r, j) = cplx{std::cos(tm), std::sin(tm)};
    }
  std::vector<cplx> data = f.v;
  const int nAxes = 2 * N;
  for (int a = 0; a < N; ++a) apply_axis(data, Dy, a, nAxes, n);          // y_a -> xi_a
  for (int a = 0; a < N; ++a) apply_axis(data, De, N + a, nAxes, n);      // eta_a -> x_a
  // Slots now hold [xi axes..., x axes...]; swap the two blocks.
  Symbol out(f.grid);
  const int m = g.posCount();
  const double scale = g.wXi() * std::pow(2.0 * kPi, -N);
  for (int xi = 0; xi < m; ++xi)
    for (int x = 0; x < m; ++x)
      out.at(x, xi) = scale * data[static_cast<std::size_t>(xi) * m + x];
  return out;
}

Symbol nyquist_free(const Symbol& f) {
  const auto& g = *f.grid;
  const int N = g.N(), m = g.posCount();
  Symbol F = symplectic_fourier(f);
  auto onEdge = [&](int flat) {
    auto d = g.decode(flat);
    for (int a = 0; a < N; ++a)
      if (d[a] == 0) return true;  // per-axis index 0 <=> step -n/2
    return false;
  };
  for (int p = 0; p < m; ++p) {
    const bool pe = onEdge(p);
    for (int k = 0; k < m; ++k)
      if (pe || onEdge(k)) F.at(p, k) = cplx{0.0, 0.0};
  }
  return symplectic_fourier(F);  // the transform is involutive
}

Symbol translate(const PhasePoint& Z, const Symbol& f) {
  const auto& g = *f.grid;
  std::array<int, 2> ps{0, 0}, ms{0, 0};
  for (int a = 0; a < g.N(); ++a) {
    ps[a] = g.posSteps(Z.x[a]);
    ms[a] = g.momSteps(Z.xi[a]);
  }
  for (int a = 0; a < 2; ++a) {
    ps[a] = -ps[a];
    ms[a] = -ms[a];
  }
  // out(X) = f(X - Z): read from the index shifted by -Z.
  Symbol out(f.grid);
  const int m = g.posCount();
  for (int p = 0; p < m; ++p) {
    int ps2 = g.shiftPos(p, ps);
    for (int k = 0; k < m; ++k) out.at(p, k) = f.at(ps2, g.shiftMom(k, ms));
  }
  return out;
}

Symbol conj(const Symbol& f) {
  Symbol out(f.grid);
  for (std::size_t i = 0; i < f.v.size(); ++i) out.v[i] = std::conj(f.v[i]);
  return out;
}

Symbol operator+(const Symbol& a, const Symbol& b) {
  Symbol out = a;
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] += b.v[i];
  return out;
}

Symbol operator-(const Symbol& a, const Symbol& b) {
  Symbol out = a;
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] -= b.v[i];
  return out;
}

Symbol operator*(cplx s, const Symbol& a) {
  Symbol out = a;
  for (auto& z : out.v) z *= s;
  return out;
}

WaveFunction operator+(const WaveFunction& a, const WaveFunction& b) {
  WaveFunction out = a;
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] += b.v[i];
  return out;
}

WaveFunction operator-(const WaveFunction& a, const WaveFunction& b) {
  WaveFunction out = a;
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] -= b.v[i];
  return out;
}

WaveFunction operator*(cplx s, const WaveFunction& a) {
  WaveFunction out = a;
  for (auto& z : out.v) z *= s;
  return out;
}

TrigInterpolant::TrigInterpolant(const Symbol& f) : grid_(f.grid) {
  const auto& g = *grid_;
  const int n = g.n(), N = g.N();
  // Forward DFT per axis onto the centered window [-n/2, n/2); storage
  // index k maps to frequency k - n/2.
  Eigen::MatrixXcd F(n, n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      double th = -2.0 * kPi * (k - n / 2) * j / n;
      F(k, j) = cplx{std::cos(th), std::sin(th)} / static_cast<double>(n);
    }
  coeff_ = f.v;
  for (int a = 0; a < 2 * N; ++a) apply_axis(coeff_, F, a, 2 * N, n);
}

cplx TrigInterpolant::operator()(const PhasePoint& Z) const {
  const auto& g = *grid_;
  const int n = g.n(), N = g.N();
  // Per-axis phase tables e^{i k th}, th the normalized axis coordinate.
  std::array<std::vector<cplx>, 4> ph;
  auto fill = [&](int slot, double th) {
    ph[slot].resize(n);
    for (int k = 0; k < n; ++k) {
      double a = (k - n / 2) * th;
      ph[slot][k] = cplx{std::cos(a), std::sin(a)};
    }
  };
  for (int a = 0; a < N; ++a) {
    fill(a, 2.0 * kPi * (Z.x[a] + g.L()) / (2.0 * g.L()));
    fill(N + a, 2.0 * kPi * (Z.xi[a] + g.n() / 2.0 * g.dxi()) / (g.n() * g.dxi()));
  }
  const int nAxes = 2 * N;
  cplx acc{0.0, 0.0};
  std::array<int, 4> idx{0, 0, 0, 0};
  const std::size_t total = coeff_.size();
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t r = flat;
    cplx w{1.0, 0.0};
    for (int a = nAxes - 1; a >= 0; --a) {
      idx[a] = static_cast<int>(r % n);
      r /= n;
      w *= ph[a][idx[a]];
    }
    acc += coeff_[flat] * w;
  }
  return acc;
}

CoarseXiGrid::CoarseXiGrid(GridPtr g, int stride) : grid_(std::move(g)), stride_(stride) {
  if (stride < 1 || grid_->n() % stride != 0) throw std::invalid_argument("CoarseXiGrid: stride must divide n");
  c_ = grid_->n() / stride;
  count_ = 1;
  for (int a = 0; a < 2 * grid_->N(); ++a) count_ *= c_;
  w_ = std::pow(stride * grid_->dx(), grid_->N()) * std::pow(stride * grid_->dxi(), grid_->N());
}

PhasePoint CoarseXiGrid::point(int i) const { return grid_->xiPoint(fineXiIndex(i)); }

int CoarseXiGrid::fineXiIndex(int i) const {
  const int N = grid_->N(), n = grid_->n();
  std::array<int, 4> idx{0, 0, 0, 0};
  int r = i;
  for (int a = 2 * N - 1; a >= 0; --a) {
    idx[a] = (r % c_) * stride_;
    r /= c_;
  }
  int pos = N == 1 ? idx[0] : idx[0] * n + idx[1];
  int mom = N == 1 ? idx[1] : idx[2] * n + idx[3];
  return pos * grid_->posCount() + mom;
}

DoubleSymbol materialize(const GridPtr& g, int stride,
                         const std::function<cplx(const PhasePoint&, const PhasePoint&)>& f) {
  DoubleSymbol D;
  D.grid = g;
  D.eval = f;
  D.coarse = std::make_shared<CoarseXiGrid>(g, stride);
  const int c = D.coarse->count();
  D.dense.resize(static_cast<std::size_t>(c) * c);
  for (int i = 0; i < c; ++i) {
    PhasePoint X = D.coarse->point(i);
    for (int j = 0; j < c; ++j) D.dense[static_cast<std::size_t>(i) * c + j] = f(X, D.coarse->point(j));
  }
  return D;
}

cplx pair_bilinear_double(const DoubleSymbol& F, const DoubleSymbol& G) {
  if (!F.coarse || !G.coarse || F.coarse->count() != G.coarse->count())
    throw std::invalid_argument("pair_bilinear_double: incompatible dense grids");
  double w = F.coarse->weight();
  return w * w * kernels::dot(F.dense.data(), G.dense.data(), F.dense.size());
}

}  // namespace magweyl
