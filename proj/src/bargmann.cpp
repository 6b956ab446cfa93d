#include "magweyl/bargmann.hpp"

#include <cmath>

namespace magweyl {

namespace {

double two_pi_pow(int N) { return std::pow(2.0 * kPi, N); }

cplx unit_phase(double th) { return {std::cos(th), std::sin(th)}; }

Point coords(const PhaseGrid& g, int flat) {
  auto idx = g.decode(flat);
  return {g.xpos(idx[0]), g.N() == 2 ? g.xpos(idx[1]) : 0.0};
}

WaveFunction normalized(WaveFunction u) {
  const double nrm = norm_l2(u);
  if (nrm <= 0.0) throw std::invalid_argument("bargmann: zero window");
  return (cplx{1.0 / nrm, 0.0}) * u;
}

WaveFunction apply_phase(const WeylPhase& P, const WaveFunction& u) {
  WaveFunction out(u.grid);
  for (std::size_t j = 0; j < P.dst.size(); ++j) out.v[j] = P.phase[j] * u.v[P.dst[j]];
  return out;
}

}  // namespace

WaveFunction dressed_window(const PotentialSpec& A, const WaveFunction& v) {
  const auto& g = *v.grid;
  WaveFunction out(v.grid);
  for (int j = 0; j < g.posCount(); ++j) {
    const Point x = coords(g, j);
    out.v[j] = unit_phase(circulation(A, Point{0.0, 0.0}, x)) * v.v[j];
  }
  return out;
}

WaveFunction gaussian_window(const GridPtr& g) {
  const double c = std::pow(kPi, -0.25 * g->N());
  WaveFunction v = make_wavefunction(g, [&](const std::array<double, 2>& x) {
    const double q = x[0] * x[0] + x[1] * x[1];
    return cplx{c * std::exp(-0.5 * q), 0.0};
  });
  return normalized(v);
}

WaveFunction coherent_state(const PotentialSpec& A, const WaveFunction& v,
                            const PhasePoint& Y) {
  return apply_phase(weyl_phase(A, v.grid, Y), dressed_window(A, v));
}

WaveFunction coherent_state_explicit(const PotentialSpec& A, const WaveFunction& v,
                                     const PhasePoint& Y) {
  const auto& g = *v.grid;
  const int N = g.N();
  std::array<int, 2> steps{0, 0};
  for (int a = 0; a < N; ++a) steps[a] = g.posSteps(Y.x[a]);
  WaveFunction out(v.grid);
  for (int j = 0; j < g.posCount(); ++j) {
    const Point x = coords(g, j);
    const Point xy{x[0] + Y.x[0], x[1] + Y.x[1]};
    const int jw = g.shiftPos(j, steps);
    const Point xw = coords(g, jw);  // periodic representative of x + y
    double th = -circulation(A, x, xy) + circulation(A, Point{0.0, 0.0}, xw);
    for (int a = 0; a < N; ++a) th -= (x[a] + 0.5 * Y.x[a]) * Y.xi[a];
    out.v[j] = unit_phase(th) * v.v[jw];
  }
  return out;
}

cplx bargmann_inner(const BargmannFunction& a, const BargmannFunction& b) {
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < a.v.size(); ++i) acc += std::conj(a.v[i]) * b.v[i];
  return haar_weight(a.grid) * acc;
}

double bargmann_norm(const BargmannFunction& a) {
  return std::sqrt(std::abs(bargmann_inner(a, a).real()));
}

BargmannFunction operator-(const BargmannFunction& a, const BargmannFunction& b) {
  BargmannFunction out(a.grid);
  for (std::size_t i = 0; i < a.v.size(); ++i) out.v[i] = a.v[i] - b.v[i];
  return out;
}

BargmannTransform::BargmannTransform(const PotentialSpec& A, const WaveFunction& v)
    : g_(v.grid), A_(A), w_(normalized(dressed_window(A, v))) {}

WaveFunction BargmannTransform::state(const PhasePoint& X) const {
  return apply_phase(weyl_phase(A_, g_, X), w_);
}

BargmannFunction BargmannTransform::forward(const WaveFunction& u) const {
  BargmannFunction out(g_);
  const double wx = g_->wX();
  for (int i = 0; i < g_->xiCount(); ++i) {
    const WeylPhase P = weyl_phase(A_, g_, g_->xiPoint(i));
    cplx acc{0.0, 0.0};
    for (std::size_t j = 0; j < P.dst.size(); ++j)
      acc += std::conj(P.phase[j] * w_.v[P.dst[j]]) * u.v[j];
    out.v[i] = wx * acc;
  }
  return out;
}

WaveFunction BargmannTransform::adjoint(const BargmannFunction& Phi) const {
  WaveFunction out(g_);
  const double w = haar_weight(g_);
  for (int i = 0; i < g_->xiCount(); ++i) {
    const WeylPhase P = weyl_phase(A_, g_, g_->xiPoint(i));
    const cplx c = w * Phi.v[i];
    for (std::size_t j = 0; j < P.dst.size(); ++j)
      out.v[j] += c * P.phase[j] * w_.v[P.dst[j]];
  }
  return out;
}

BargmannFunction BargmannTransform::project(const BargmannFunction& Phi) const {
  return forward(adjoint(Phi));
}

cplx BargmannTransform::kernel(const PhasePoint& X, const PhasePoint& Y) const {
  return inner(state(X), state(Y));
}

Symbol wigner_window(const PotentialSpec& A, const WaveFunction& v) {
  const WaveFunction w = normalized(dressed_window(A, v));
  return symbol_of(A, outer(w, w));
}

cplx coherent_functional(const PotentialSpec& A, const WaveFunction& v,
                         const PhasePoint& Z, const Symbol& f) {
  const WaveFunction w = normalized(dressed_window(A, v));
  const WaveFunction vZ = apply_phase(weyl_phase(A, v.grid, Z), w);
  return inner(vZ, apply(op_weyl(A, f), vZ));
}

BargmannFunction rep_apply(const DoubleSymbol& F, const BargmannFunction& Phi) {
  const auto& g = *Phi.grid;
  BargmannFunction out(Phi.grid);
  const double w = haar_weight(Phi.grid);
  for (int i = 0; i < g.xiCount(); ++i) {
    const PhasePoint X = g.xiPoint(i);
    cplx acc{0.0, 0.0};
    for (int j = 0; j < g.xiCount(); ++j) acc += F(X, X - g.xiPoint(j)) * Phi.v[j];
    out.v[i] = w * acc;
  }
  return out;
}

BargmannFunction rep_apply(const ModulationMap& M, const BargmannFunction& Phi) {
  // sum_Y dmu(Y) [M_h(f)](X, X - Y) Phi(Y)
  //   = kappa_mu Tr(op^A(-X) Op^A(f) S Op^A(h)),  S = sum_Y dmu(Y) Phi(Y) op^A(Y),
  // so one accumulated phase matrix and two dense products serve every X.
  const GridPtr& g = M.grid();
  const int m = g->posCount();
  const double w = haar_weight(g);
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(m, m);
  for (int j = 0; j < g->xiCount(); ++j) {
    const WeylPhase P = weyl_phase(M.potential(), g, g->xiPoint(j));
    const cplx c = w * Phi.v[j];
    for (int r = 0; r < m; ++r) S(r, P.dst[r]) += c * P.phase[r];
  }
  const Eigen::MatrixXcd C = M.opF().M * (S * M.opH().M);
  const double scale = M.kappa() / two_pi_pow(g->N());
  BargmannFunction out(g);
  for (int i = 0; i < g->xiCount(); ++i) {
    const WeylPhase P = weyl_phase(M.potential(), g, -g->xiPoint(i));
    out.v[i] = scale * trace_times(P, C);
  }
  return out;
}

DoubleSymbol rep_unit(const GridPtr& g) {
  DoubleSymbol F;
  F.grid = g;
  const double c = two_pi_pow(g->N()) / g->wXi();
  F.eval = [c](const PhasePoint&, const PhasePoint& Y) {
    for (int a = 0; a < 2; ++a)
      if (std::abs(Y.x[a]) > 1e-9 || std::abs(Y.xi[a]) > 1e-9) return cplx{0.0, 0.0};
    return cplx{c, 0.0};
  };
  return F;
}

DoubleSymbol kohn_nirenberg(const DoubleSymbol& F) {
  DoubleSymbol K;
  K.grid = F.grid;
  const GridPtr g = F.grid;
  const auto eval = F.eval;
  const double scale = g->wXi() / two_pi_pow(g->N());
  K.eval = [g, eval, scale](const PhasePoint& X, const PhasePoint& W) {
    cplx acc{0.0, 0.0};
    for (int j = 0; j < g->xiCount(); ++j) {
      const PhasePoint Y = g->xiPoint(j);
      acc += unit_phase(sigma(W, Y)) * eval(X, Y);
    }
    return scale * acc;
  };
  return K;
}

}  // namespace magweyl
