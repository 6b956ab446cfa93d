#include "magweyl/modulation.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace magweyl {

namespace {

int wrap(int i, int n) {
  i %= n;
  return i < 0 ? i + n : i;
}

// Flat (position, momentum) indices of an on-grid point, with periodic
// wraparound for out-of-box coordinates.
std::pair<int, int> xi_flat(const PhaseGrid& g, const PhasePoint& P) {
  const int N = g.N(), n = g.n(), half = n / 2;
  std::array<int, 2> pi{0, 0}, mi{0, 0};
  for (int a = 0; a < N; ++a) {
    pi[a] = wrap(g.posSteps(P.x[a]) + half, n);
    mi[a] = wrap(g.momSteps(P.xi[a]) + half, n);
  }
  return {g.encode(pi), g.encode(mi)};
}

double two_pi_pow(int N) { return std::pow(2.0 * kPi, N); }

// Note on conventions: all operator fast paths below quantize phase-space
// labels as given, without reducing differences such as X - Y to the
// fundamental box.  On an even grid the Weyl system is a projective
// representation of the discrete torus whose section Z -> op(Z) cannot be
// chosen globally consistent (momentum wraps carry a half-step sign), and
// the unreduced section is the one under which the group-average identities
// used by the inversion, orthogonality and trace checks hold exactly.
// Pointwise comparisons against function-level plane-wave products are
// convention-independent only when no argument difference crosses the box
// boundary, which the tests arrange by sampling from the centered half-box.

Symbol gaussian_fixture(const GridPtr& g, double s, double shift) {
  return make_symbol(g, [&](const PhasePoint& P) {
    double q = 0.0;
    for (int a = 0; a < g->N(); ++a) {
      double x = P.x[a] - (a == 0 ? shift : 0.0);
      q += x * x + P.xi[a] * P.xi[a];
    }
    return cplx{std::exp(-s * q), 0.0};
  });
}

}  // namespace

double haar_weight(const GridPtr& g) { return g->wXi() / two_pi_pow(g->N()); }

cplx pair_haar(const Symbol& f, const Symbol& g) {
  return pair_bilinear(f, g) / two_pi_pow(f.grid->N());
}

cplx pair_haar_double(const DoubleSymbol& F, const DoubleSymbol& G) {
  return pair_bilinear_double(F, G) / two_pi_pow(2 * F.grid->N());
}

double calibrate_kappa(const PotentialSpec& A, const GridPtr& g) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, double>, double> cache;
  const std::tuple<int, int, double> key{g->N(), g->n(), g->L()};
  {
    std::scoped_lock lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  // The pairing/trace identity is exact whenever one factor has no spectral
  // content at the band edge, so calibrate with band-limited fixtures; the
  // decay rate n*pi/(4L^2) balances position and momentum tails.
  const double s = g->n() * kPi / (4.0 * g->L() * g->L());
  Symbol f = nyquist_free(gaussian_fixture(g, s, 0.3 * g->dx()));
  Symbol h = nyquist_free(gaussian_fixture(g, 1.2 * s, -0.5 * g->dx()));
  cplx lhs = pair_bilinear(f, h);
  cplx tr = (op_weyl(A, f).M * op_weyl(A, h).M).trace();
  double kappa = std::real(lhs / tr);
  std::scoped_lock lock(mu);
  cache.emplace(key, kappa);
  return kappa;
}

cplx trace_phase_sandwich(const WeylPhase& P1, const Eigen::MatrixXcd& C1,
                          const WeylPhase& P2, const Eigen::MatrixXcd& C2) {
  // Tr(P1 C1 P2 C2) = sum_{j,r} ph1[j] C1(dst1[j], r) ph2[r] C2(dst2[r], j).
  const int m = static_cast<int>(P1.dst.size());
  cplx acc{0.0, 0.0};
  for (int r = 0; r < m; ++r) {
    cplx inner{0.0, 0.0};
    const auto c2row = C2.row(P2.dst[r]);
    for (int j = 0; j < m; ++j) inner += P1.phase[j] * C1(P1.dst[j], r) * c2row(j);
    acc += P2.phase[r] * inner;
  }
  return acc;
}

ModulationMap::ModulationMap(Symbol h, Symbol f, const PotentialSpec& A)
    : g_(f.grid), A_(A), F_(op_weyl(A, f)), H_(op_weyl(A, h)), kappa_(calibrate_kappa(A, g_)) {
  if (h.grid.get() != f.grid.get()) throw std::invalid_argument("ModulationMap: grid mismatch");
}

cplx ModulationMap::at(const PhasePoint& X, const PhasePoint& Y) const {
  WeylPhase P1 = weyl_phase(A_, g_, -X);
  WeylPhase P2 = weyl_phase(A_, g_, X - Y);
  return kappa_ / two_pi_pow(g_->N()) * trace_phase_sandwich(P1, F_.M, P2, H_.M);
}

std::vector<cplx> ModulationMap::row(const PhasePoint& X) const {
  // M(X, Z) = kappa_mu Tr(op(X-Z) [H op(-X) F]); one O(m^3) product, then
  // O(m) per Z.
  const double scale = kappa_ / two_pi_pow(g_->N());
  Eigen::MatrixXcd C = H_.M * times(weyl_phase(A_, g_, -X), F_.M);
  std::vector<cplx> out(g_->xiCount());
  for (int i = 0; i < g_->xiCount(); ++i) {
    PhasePoint Z = g_->xiPoint(i);
    out[i] = scale * trace_times(weyl_phase(A_, g_, X - Z), C);
  }
  return out;
}

DoubleSymbol ModulationMap::lazy() const {
  auto self = std::make_shared<ModulationMap>(*this);
  DoubleSymbol D;
  D.grid = g_;
  D.eval = [self](const PhasePoint& X, const PhasePoint& Y) { return self->at(X, Y); };
  return D;
}

DoubleSymbol ModulationMap::dense(int stride) const {
  auto self = std::make_shared<ModulationMap>(*this);
  DoubleSymbol D;
  D.grid = g_;
  D.eval = [self](const PhasePoint& X, const PhasePoint& Y) { return self->at(X, Y); };
  D.coarse = std::make_shared<CoarseXiGrid>(g_, stride);
  const int c = D.coarse->count();
  const double scale = kappa_ / two_pi_pow(g_->N());
  D.dense.resize(static_cast<std::size_t>(c) * c);
  for (int i = 0; i < c; ++i) {
    PhasePoint X = D.coarse->point(i);
    Eigen::MatrixXcd C = H_.M * times(weyl_phase(A_, g_, -X), F_.M);
    for (int j = 0; j < c; ++j) {
      PhasePoint Y = D.coarse->point(j);
      D.dense[static_cast<std::size_t>(i) * c + j] =
          scale * trace_times(weyl_phase(A_, g_, X - Y), C);
    }
  }
  return D;
}

cplx crossed_at(const ModulationMap& MF, const ModulationMap& MG, const PhasePoint& X,
                const PhasePoint& Y) {
  // (MF <> MG)(X, Y) = int dmu(Z) MF(X, Z) MG(X-Z, Y-Z); with W = X - Z,
  //   MF(X, X-W)  = kappa_mu Tr(op(W)  [H op(-X) F]),
  //   MG(W, W+c)  = kappa_mu Tr(op(-W) [G op(-c) K]),  c = Y - X.
  const GridPtr& g = MF.grid();
  const PotentialSpec& A = MF.potential();
  const double scale = MF.kappa() * MG.kappa() / two_pi_pow(2 * g->N());
  Eigen::MatrixXcd C1 = MF.opH().M * times(weyl_phase(A, g, -X), MF.opF().M);
  Eigen::MatrixXcd C2 = times(MG.opF().M, weyl_phase(A, g, -(Y - X))) * MG.opH().M;
  cplx acc{0.0, 0.0};
  for (int i = 0; i < g->xiCount(); ++i) {
    PhasePoint W = g->xiPoint(i);
    acc += trace_times(weyl_phase(A, g, W), C1) * trace_times(weyl_phase(A, g, -W), C2);
  }
  return haar_weight(g) * scale * acc;
}

DoubleSymbol crossed_product(const DoubleSymbol& F, const DoubleSymbol& G) {
  const GridPtr g = F.grid;
  auto fe = F.eval;
  auto ge = G.eval;
  DoubleSymbol D;
  D.grid = g;
  D.eval = [g, fe, ge](const PhasePoint& X, const PhasePoint& Y) {
    cplx acc{0.0, 0.0};
    for (int i = 0; i < g->xiCount(); ++i) {
      PhasePoint Z = g->xiPoint(i);
      acc += fe(X, Z) * ge(X - Z, Y - Z);
    }
    return haar_weight(g) * acc;
  };
  return D;
}

DoubleSymbol crossed_involution(const DoubleSymbol& F) {
  auto fe = F.eval;
  DoubleSymbol D;
  D.grid = F.grid;
  D.eval = [fe](const PhasePoint& X, const PhasePoint& Y) { return std::conj(fe(X - Y, -Y)); };
  return D;
}

Symbol modulation_adjoint(const Symbol& h, const DoubleSymbol& G, const PotentialSpec& A) {
  if (!G.coarse || G.dense.empty())
    throw std::invalid_argument("modulation_adjoint: G must be dense");
  const GridPtr& g = h.grid;
  const int m = g->posCount(), c = G.coarse->count();
  const double w = G.coarse->weight() / two_pi_pow(g->N());
  OperatorMatrix H = op_weyl(A, h);
  OperatorMatrix T(g);
  for (int i = 0; i < c; ++i) {
    PhasePoint X = G.coarse->point(i);
    // S = sum_Y G(X, Y) op(Y - X), accumulated as a phase permutation sum.
    Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(m, m);
    for (int j = 0; j < c; ++j) {
      cplx gv = G.dense[static_cast<std::size_t>(i) * c + j];
      if (gv == cplx{0.0, 0.0}) continue;
      WeylPhase P = weyl_phase(A, g, G.coarse->point(j) - X);
      for (int r = 0; r < m; ++r) S(r, P.dst[r]) += gv * P.phase[r];
    }
    T.M += times(weyl_phase(A, g, X), Eigen::MatrixXcd(H.M * S));
  }
  T.M *= w * w;
  return symbol_of(A, T);
}

DoubleSymbol j_embed(const Symbol& f, const Symbol& h) {
  const GridPtr g = f.grid;
  Symbol fc = f, hc = h;
  DoubleSymbol D;
  D.grid = g;
  D.eval = [g, fc, hc](const PhasePoint& X, const PhasePoint& Y) {
    auto [px, mx] = xi_flat(*g, X);
    auto [py, my] = xi_flat(*g, Y);
    return fc.at(px, mx) * hc.at(py, my);
  };
  return D;
}

Symbol j_adjoint(const Symbol& h, const DoubleSymbol& F) {
  const GridPtr& g = h.grid;
  Symbol out(g);
  const double w = haar_weight(g);
  for (int p = 0; p < g->posCount(); ++p)
    for (int k = 0; k < g->momCount(); ++k) {
      PhasePoint X = g->point(p, k);
      cplx acc{0.0, 0.0};
      for (int i = 0; i < g->xiCount(); ++i)
        acc += F.eval(X, g->xiPoint(i)) * h.v[static_cast<std::size_t>(i)];
      out.at(p, k) = w * acc;
    }
  return out;
}

DoubleSymbol box_product(const Symbol& f, const Symbol& h, const Symbol& g, const Symbol& k,
                         const PotentialSpec& A) {
  return j_embed(moyal_kernel_route(f, g, A), moyal_kernel_route(k, h, A));
}

Symbol idempotent_window(const PotentialSpec& A, const WaveFunction& w) {
  return symbol_of(A, outer(w, w));
}

LemmaResiduals lemma_identities(const PotentialSpec& A, const Symbol& f1, const Symbol& f2,
                                const Symbol& f3) {
  const GridPtr& g = f1.grid;
  LemmaResiduals R;

  // (a) cyclicity of the pairing under the product.
  cplx a1 = pair_bilinear(moyal_kernel_route(f1, f2, A), f3);
  cplx a2 = pair_bilinear(f1, moyal_kernel_route(f2, f3, A));
  cplx a3 = pair_bilinear(f2, moyal_kernel_route(f3, f1, A));
  double den = std::max(1e-300, std::abs(a1));
  R.a = std::max(std::abs(a1 - a2), std::abs(a1 - a3)) / den;

  // (b) plane-wave completeness, literal quadrature over Z.
  cplx acc{0.0, 0.0};
  for (int i = 0; i < g->xiCount(); ++i) {
    PhasePoint Z = g->xiPoint(i);
    acc += pair_bilinear(f1, plane_wave(g, Z)) * pair_bilinear(plane_wave(g, -Z), f2);
  }
  cplx ref = pair_bilinear(f1, f2);
  R.b_constant = std::abs(g->wXi() * acc / (ref * two_pi_pow(2 * g->N())));
  cplx lhs_mu = haar_weight(g) * acc / two_pi_pow(2 * g->N());
  R.b = std::abs(lhs_mu - pair_haar(f1, f2)) / std::max(1e-300, std::abs(pair_haar(f1, f2)));

  // (c) int dmu(Z) <Theta_Z f, g>_mu = (int_mu f)(int_mu g), with the
  // pairing evaluated through the pairing-trace identity.
  const double kappa = calibrate_kappa(A, g);
  OperatorMatrix F = op_weyl(A, f1), G = op_weyl(A, f2);
  cplx accc{0.0, 0.0};
  for (int i = 0; i < g->xiCount(); ++i) {
    PhasePoint Z = g->xiPoint(i);
    accc += trace_phase_sandwich(weyl_phase(A, g, -Z), F.M, weyl_phase(A, g, Z), G.M);
  }
  cplx lhs = haar_weight(g) * kappa / two_pi_pow(g->N()) * accc;
  Symbol one = make_symbol(g, [](const PhasePoint&) { return cplx{1.0, 0.0}; });
  cplx rhs = pair_haar(f1, one) * pair_haar(f2, one);
  R.c = std::abs(lhs - rhs) / std::max(1e-300, std::abs(rhs));
  return R;
}

}  // namespace magweyl
