#include "magweyl/calculus.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "magweyl/kernels.hpp"

namespace magweyl {

namespace {

int wrap(int i, int n) {
  i %= n;
  return i < 0 ? i + n : i;
}

}  // namespace

OperatorMatrix identity_op(const GridPtr& g) {
  OperatorMatrix T(g);
  T.M = Eigen::MatrixXcd::Identity(g->posCount(), g->posCount());
  return T;
}

WaveFunction apply(const OperatorMatrix& T, const WaveFunction& u) {
  WaveFunction out(T.grid);
  Eigen::Map<const Eigen::VectorXcd> uv(u.v.data(), u.v.size());
  Eigen::Map<Eigen::VectorXcd>(out.v.data(), out.v.size()) = T.M * uv;
  return out;
}

OperatorMatrix adjoint(const OperatorMatrix& T) {
  OperatorMatrix out(T.grid);
  out.M = T.M.adjoint();
  return out;
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
  OperatorMatrix out(a.grid);
  out.M = a.M * b.M;
  return out;
}

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
  OperatorMatrix out(a.grid);
  out.M = a.M + b.M;
  return out;
}

OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
  OperatorMatrix out(a.grid);
  out.M = a.M - b.M;
  return out;
}

OperatorMatrix operator*(cplx s, const OperatorMatrix& a) {
  OperatorMatrix out(a.grid);
  out.M = s * a.M;
  return out;
}

double hs_norm(const OperatorMatrix& T) { return T.M.norm(); }

cplx hs_inner(const OperatorMatrix& a, const OperatorMatrix& b) {
  return (a.M.adjoint() * b.M).trace();
}

cplx op_trace(const OperatorMatrix& T) { return T.M.trace(); }

OperatorMatrix outer(const WaveFunction& u, const WaveFunction& v) {
  OperatorMatrix T(u.grid);
  const int m = T.grid->posCount();
  const double w = T.grid->wX();
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) T.M(j, k) = w * u.v[j] * std::conj(v.v[k]);
  return T;
}

WeylPhase weyl_phase(const PotentialSpec& A, const GridPtr& g, const PhasePoint& Y) {
  const int N = g->N(), m = g->posCount();
  std::array<int, 2> steps{0, 0};
  for (int a = 0; a < N; ++a) steps[a] = g->posSteps(Y.x[a]);
  WeylPhase P;
  P.grid = g;
  P.dst.resize(m);
  P.phase.resize(m);
  for (int j = 0; j < m; ++j) {
    auto idx = g->decode(j);
    Point x{g->xpos(idx[0]), N == 2 ? g->xpos(idx[1]) : 0.0};
    Point xy{x[0] + Y.x[0], x[1] + Y.x[1]};
    double th = -circulation(A, x, xy);
    for (int a = 0; a < N; ++a) th -= (x[a] + 0.5 * Y.x[a]) * Y.xi[a];
    P.phase[j] = cplx{std::cos(th), std::sin(th)};
    P.dst[j] = g->shiftPos(j, steps);
  }
  return P;
}

OperatorMatrix to_matrix(const WeylPhase& P) {
  OperatorMatrix T(P.grid);
  for (std::size_t j = 0; j < P.dst.size(); ++j) T.M(j, P.dst[j]) = P.phase[j];
  return T;
}

OperatorMatrix weyl_system(const PotentialSpec& A, const GridPtr& g, const PhasePoint& Y) {
  return to_matrix(weyl_phase(A, g, Y));
}

cplx trace_times(const WeylPhase& P, const Eigen::MatrixXcd& C) {
  cplx acc{0.0, 0.0};
  for (std::size_t j = 0; j < P.dst.size(); ++j) acc += P.phase[j] * C(P.dst[j], j);
  return acc;
}

Eigen::MatrixXcd times(const WeylPhase& P, const Eigen::MatrixXcd& C) {
  Eigen::MatrixXcd out(C.rows(), C.cols());
  for (Eigen::Index j = 0; j < out.rows(); ++j) out.row(j) = P.phase[j] * C.row(P.dst[j]);
  return out;
}

Eigen::MatrixXcd times(const Eigen::MatrixXcd& C, const WeylPhase& P) {
  Eigen::MatrixXcd out(C.rows(), C.cols());
  // (C P)(i, dst[j]) = C(i, j) phase[j] ... column j of P has entry at row j? No:
  // P(j, dst[j]) = phase[j], so (C P)(i, k) = sum_j C(i, j) P(j, k) picks j with
  // dst[j] = k.
  for (std::size_t j = 0; j < P.dst.size(); ++j) out.col(P.dst[j]) = C.col(j) * P.phase[j];
  return out;
}

namespace {

// Enumerate the Weyl system over all grid Y. The row phase of op^A(Y)
// splits into a circulation factor that depends only on the position shift
// (computed once per shift) and per-axis momentum tables, so the callback
// receives fully assembled rows at a few complex multiplies each.
template <class Fn>
void for_each_weyl(const PotentialSpec& A, const GridPtr& gp, Fn&& fn) {
  const auto& g = *gp;
  const int N = g.N(), n = g.n(), m = g.posCount(), mx = g.momCount();
  std::vector<int> dst(m);
  std::vector<cplx> circ(m), phase(m), ax0(n), ax1(n);
  auto cis = [](double th) { return cplx{std::cos(th), std::sin(th)}; };
  for (int yp = 0; yp < m; ++yp) {
    auto yi = g.decode(yp);
    std::array<int, 2> steps{yi[0] - n / 2, N == 2 ? yi[1] - n / 2 : 0};
    const double y0 = steps[0] * g.dx(), y1 = N == 2 ? steps[1] * g.dx() : 0.0;
    for (int j = 0; j < m; ++j) {
      auto idx = g.decode(j);
      Point x{g.xpos(idx[0]), N == 2 ? g.xpos(idx[1]) : 0.0};
      circ[j] = cis(-circulation(A, x, {x[0] + y0, x[1] + y1}));
      dst[j] = g.shiftPos(j, steps);
    }
    for (int ym = 0; ym < mx; ++ym) {
      auto ki = g.decode(ym);
      const double e0 = g.xmom(ki[0]);
      for (int t = 0; t < n; ++t) ax0[t] = cis(-(g.xpos(t) + 0.5 * y0) * e0);
      if (N == 1) {
        for (int j = 0; j < m; ++j) phase[j] = circ[j] * ax0[j];
      } else {
        const double e1 = g.xmom(ki[1]);
        for (int t = 0; t < n; ++t) ax1[t] = cis(-(g.xpos(t) + 0.5 * y1) * e1);
        for (int j = 0; j < m; ++j) phase[j] = circ[j] * ax0[j / n] * ax1[j % n];
      }
      fn(yp, ym, dst, phase);
    }
  }
}

}  // namespace

// Quantization expands the symbol over the Weyl system: the grid operators
// op^A(Y), Y running over all phase-space grid points, are mutually
// orthogonal in the Hilbert-Schmidt inner product with squared norm equal
// to the position-grid size, for any gauge and any flux. Op^A(f) =
// (2pi)^{-N} sum_Y wXi (Ff)(Y) op^A(Y) with Ff the symplectic Fourier
// transform, and symbol_of recovers the coefficients by orthogonal
// projection, so the two maps are exact inverses on the grid.
OperatorMatrix op_weyl(const PotentialSpec& A, const Symbol& f) {
  const auto& g = *f.grid;
  const int N = g.N(), m = g.posCount();
  Symbol Ff = symplectic_fourier(f);
  OperatorMatrix T(f.grid);
  const double scale = g.wXi() / std::pow(2.0 * kPi, N);
  for_each_weyl(A, f.grid,
                [&](int yp, int ym, const std::vector<int>& dst, const std::vector<cplx>& phase) {
                  cplx c = scale * Ff.at(yp, ym);
                  for (int j = 0; j < m; ++j) T.M(j, dst[j]) += c * phase[j];
                });
  return T;
}

Symbol symbol_of(const PotentialSpec& A, const OperatorMatrix& T) {
  const auto& g = *T.grid;
  const int N = g.N(), m = g.posCount();
  Symbol Fs(T.grid);
  const double scale = std::pow(2.0 * kPi, N) / (g.wXi() * double(m));
  for_each_weyl(A, T.grid,
                [&](int yp, int ym, const std::vector<int>& dst, const std::vector<cplx>& phase) {
                  cplx acc{0.0, 0.0};
                  for (int j = 0; j < m; ++j) acc += std::conj(phase[j]) * T.M(j, dst[j]);
                  Fs.at(yp, ym) = scale * acc;
                });
  // Symplectic Fourier is an involution on the grid.
  return symplectic_fourier(Fs);
}

Symbol moyal_kernel_route(const Symbol& f, const Symbol& g, const PotentialSpec& A) {
  return symbol_of(A, op_weyl(A, f) * op_weyl(A, g));
}

namespace {

// One output point of the literal double quadrature
//   (f #^B g)(X) = pi^{-2N} (sum_Y sum_Z wXi^2) e^{-2i sigma(X-Y,X-Z)}
//                  exp[-i flux<x-y+z, x+y-z, -x+y+z>] f(Y) g(Z).
// Expanded: -2 sigma(X-Y,X-Z) = -2 sigma(X,Y)... using bilinearity,
//   sigma(X-Y, X-Z) = -sigma(X,Z) + sigma(X,Y) + sigma(Y,Z),
// and for constant fields the flux splits into cross(x,y)+cross(y,z)+cross(z,x)
// terms, each of which factorizes into per-axis tables. The Y-Z couplings
// are contracted axis by axis, giving ~n^5 work per output point (N=2).
struct DirectCtx {
  const Symbol& f;
  const Symbol& g;
  const FieldSpec& B;
  const PhaseGrid& gr;
  bool constField;
  double b;  // constant-field value

  DirectCtx(const Symbol& f_, const Symbol& g_, const FieldSpec& B_)
      : f(f_), g(g_), B(B_), gr(*f_.grid) {
    constField = B.kind == FieldSpec::Kind::Zero || B.kind == FieldSpec::Kind::Constant || gr.N() == 1;
    b = B.kind == FieldSpec::Kind::Constant ? B.b : 0.0;
  }

  cplx eval(int xiIdx) const { return gr.N() == 2 && constField ? fastN2(xiIdx) : generic(xiIdx); }

  static cplx cis(double th) { return {std::cos(th), std::sin(th)}; }

  cplx fastN2(int xiIdx) const {
    const int n = gr.n();
    PhasePoint X = gr.xiPoint(xiIdx);
    const double x1 = X.x[0], x2 = X.x[1];
    // G2(Z) = g(Z) e^{2i sigma(X,Z)} e^{-2i b cross(z,x)}; F2 likewise for f.
    std::vector<cplx> G2(gr.xiCount());
    for (int zp = 0; zp < gr.posCount(); ++zp) {
      auto zi = gr.decode(zp);
      double z1 = gr.xpos(zi[0]), z2 = gr.xpos(zi[1]);
      double base = -2.0 * b * (z1 * x2 - z2 * x1);
      for (int zm = 0; zm < gr.momCount(); ++zm) {
        auto ci = gr.decode(zm);
        double c1 = gr.xmom(ci[0]), c2 = gr.xmom(ci[1]);
        double th = 2.0 * (z1 * X.xi[0] + z2 * X.xi[1] - x1 * c1 - x2 * c2) + base;
        G2[static_cast<std::size_t>(zp) * gr.momCount() + zm] = g.v[static_cast<std::size_t>(zp) * gr.momCount() + zm] * cis(th);
      }
    }
    // Axis tables.
    std::vector<cplx> wc(n * n), uz(n * n), vb1(n * n), vb2(n * n);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) {
        wc[p * n + q] = cis(2.0 * gr.xpos(p) * gr.xmom(q));    // e^{2i y_p zeta_q}
        uz[p * n + q] = cis(-2.0 * gr.xmom(p) * gr.xpos(q));   // e^{-2i eta_p z_q}
        vb1[p * n + q] = cis(-2.0 * b * gr.xpos(p) * gr.xpos(q));  // e^{-2i b y1 z2}
        vb2[p * n + q] = cis(2.0 * b * gr.xpos(p) * gr.xpos(q));   // e^{+2i b y2 z1}
      }
    // Contract c2 for each y2: C[y2][z1][z2][c1].
    std::vector<cplx> C(static_cast<std::size_t>(n) * n * n * n);
    for (int y2 = 0; y2 < n; ++y2) {
      const cplx* w = &wc[y2 * n];
      for (int z1 = 0; z1 < n; ++z1)
        for (int z2 = 0; z2 < n; ++z2)
          for (int c1 = 0; c1 < n; ++c1) {
            const cplx* src = &G2[((static_cast<std::size_t>(z1) * n + z2) * n + c1) * n];
            C[((static_cast<std::size_t>(y2) * n + z1) * n + z2) * n + c1] = kernels::dot(src, w, n);
          }
    }
    cplx acc{0.0, 0.0};
    std::vector<cplx> D(n * n), E(n), t1(n), t2(n);
    for (int y1 = 0; y1 < n; ++y1)
      for (int y2 = 0; y2 < n; ++y2) {
        // Contract c1 -> D[z1][z2].
        const cplx* w1 = &wc[y1 * n];
        for (int z1 = 0; z1 < n; ++z1)
          for (int z2 = 0; z2 < n; ++z2) {
            const cplx* src = &C[((static_cast<std::size_t>(y2) * n + z1) * n + z2) * n];
            D[z1 * n + z2] = kernels::dot(src, w1, n);
          }
        double yy1 = gr.xpos(y1), yy2 = gr.xpos(y2);
        // F2 phase pieces independent of eta.
        double fbase = -2.0 * b * (x1 * yy2 - x2 * yy1) - 2.0 * (yy1 * X.xi[0] + yy2 * X.xi[1]);
        for (int e2 = 0; e2 < n; ++e2) {
          // t2[z2] = e^{-2i eta2 z2} e^{-2i b y1 z2}
          kernels::had(&uz[e2 * n], &vb1[y1 * n], t2.data(), n);
          for (int z1 = 0; z1 < n; ++z1) E[z1] = kernels::dot(&D[z1 * n], t2.data(), n);
          for (int e1 = 0; e1 < n; ++e1) {
            kernels::had(&uz[e1 * n], &vb2[y2 * n], t1.data(), n);
            cplx inner = kernels::dot(E.data(), t1.data(), n);
            double th = fbase + 2.0 * (x1 * gr.xmom(e1) + x2 * gr.xmom(e2));
            acc += f.at(y1 * n + y2, e1 * n + e2) * cis(th) * inner;
          }
        }
      }
    double w = gr.wXi();
    return acc * (w * w * std::pow(kPi, -2.0 * gr.N()));
  }

  cplx generic(int xiIdx) const {
    const int N = gr.N(), n = gr.n(), mp = gr.posCount(), mm = gr.momCount();
    PhasePoint X = gr.xiPoint(xiIdx);
    Point x{X.x[0], X.x[1]};
    // G2(Z) = g(Z) e^{2i sigma(X,Z)}.
    std::vector<cplx> G2(gr.xiCount());
    for (int zp = 0; zp < mp; ++zp)
      for (int zm = 0; zm < mm; ++zm) {
        PhasePoint Z = gr.point(zp, zm);
        G2[static_cast<std::size_t>(zp) * mm + zm] = g.at(zp, zm) * cis(2.0 * sigma(X, Z));
      }
    // Flux memo over position pairs.
    std::vector<double> flux(static_cast<std::size_t>(mp) * mp);
    for (int yp = 0; yp < mp; ++yp) {
      auto yi = gr.decode(yp);
      Point y{gr.xpos(yi[0]), N == 2 ? gr.xpos(yi[1]) : 0.0};
      for (int zp = 0; zp < mp; ++zp) {
        auto zi = gr.decode(zp);
        Point z{gr.xpos(zi[0]), N == 2 ? gr.xpos(zi[1]) : 0.0};
        Point p1{x[0] - y[0] + z[0], x[1] - y[1] + z[1]};
        Point p2{x[0] + y[0] - z[0], x[1] + y[1] - z[1]};
        Point p3{-x[0] + y[0] + z[0], -x[1] + y[1] + z[1]};
        flux[static_cast<std::size_t>(yp) * mp + zp] = flux_triangle(B, p1, p2, p3);
      }
    }
    // G3[yp][zp] = sum_zeta G2(zp, zeta) prod_a e^{2i y_a zeta_a}.
    std::vector<cplx> tyc(n * n);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) tyc[p * n + q] = cis(2.0 * gr.xpos(p) * gr.xmom(q));
    std::vector<cplx> G3(static_cast<std::size_t>(mp) * mp);
    std::vector<cplx> wv(mm);
    for (int yp = 0; yp < mp; ++yp) {
      auto yi = gr.decode(yp);
      for (int zm = 0; zm < mm; ++zm) {
        auto ci = gr.decode(zm);
        wv[zm] = tyc[yi[0] * n + ci[0]];
        if (N == 2) wv[zm] *= tyc[yi[1] * n + ci[1]];
      }
      for (int zp = 0; zp < mp; ++zp)
        G3[static_cast<std::size_t>(yp) * mp + zp] = kernels::dot(&G2[static_cast<std::size_t>(zp) * mm], wv.data(), mm);
    }
    // Outer Y sum; inner sum over z-positions with sigma and flux phases.
    std::vector<cplx> uz(n * n);
    for (int p = 0; p < n; ++p)
      for (int q = 0; q < n; ++q) uz[p * n + q] = cis(-2.0 * gr.xmom(p) * gr.xpos(q));
    cplx acc{0.0, 0.0};
    std::vector<cplx> zv(mp);
    for (int ym = 0; ym < mm; ++ym) {
      auto ei = gr.decode(ym);
      for (int zp = 0; zp < mp; ++zp) {
        auto zi = gr.decode(zp);
        zv[zp] = uz[ei[0] * n + zi[0]];
        if (N == 2) zv[zp] *= uz[ei[1] * n + zi[1]];
      }
      for (int yp = 0; yp < mp; ++yp) {
        cplx inner{0.0, 0.0};
        const cplx* g3 = &G3[static_cast<std::size_t>(yp) * mp];
        const double* fl = &flux[static_cast<std::size_t>(yp) * mp];
        for (int zp = 0; zp < mp; ++zp) inner += g3[zp] * zv[zp] * cis(-fl[zp]);
        PhasePoint Y = gr.point(yp, ym);
        acc += f.at(yp, ym) * cis(-2.0 * sigma(X, Y)) * inner;
      }
    }
    double w = gr.wXi();
    return acc * (w * w * std::pow(kPi, -2.0 * N));
  }
};

}  // namespace

std::vector<cplx> moyal_direct_points(const Symbol& f, const Symbol& g, const FieldSpec& B,
                                      const std::vector<int>& xiIndices) {
  if (f.grid != g.grid) throw std::invalid_argument("moyal_direct: grid mismatch");
  DirectCtx ctx(f, g, B);
  std::vector<cplx> out;
  out.reserve(xiIndices.size());
  for (int idx : xiIndices) out.push_back(ctx.eval(idx));
  return out;
}

Symbol moyal_direct(const Symbol& f, const Symbol& g, const FieldSpec& B) {
  if (f.grid != g.grid) throw std::invalid_argument("moyal_direct: grid mismatch");
  DirectCtx ctx(f, g, B);
  Symbol out(f.grid);
  for (int i = 0; i < f.grid->xiCount(); ++i) out.v[i] = ctx.eval(i);
  return out;
}

namespace {

// Twisted convolution on the symplectic Fourier side:
//   F(f # g)(W) = (2pi)^-N int dY Ff(Y) Fg(W-Y) e^{(i/2) sigma(Y, W-Y)} [mag phase],
// where for a constant field the z-independent cocycle contributes
// e^{-i (b/2) cross(y, w-y)}. On the periodic grid the unwrapped label sum
// Y + Z may leave the index window; reducing it back multiplies the basis
// operator by a Nyquist sign, (-1)^{(jy+jz) wmom + kw wpos} per axis, with
// wpos/wmom the wrap counts and jy, jz, kw the integer step labels. With
// those signs included the oracle is grid-exact, independent of the
// kernel route.
Symbol twisted_compose(const Symbol& f, const Symbol& g, double b) {
  const auto& gr = *f.grid;
  const int N = gr.N(), n = gr.n(), mp = gr.posCount(), mm = gr.momCount();
  Symbol Ff = symplectic_fourier(f), Fg = symplectic_fourier(g);
  Symbol H(f.grid);
  const double scale = gr.wXi() * std::pow(2.0 * kPi, -N);
  for (int wp = 0; wp < mp; ++wp) {
    auto wi = gr.decode(wp);
    for (int wm = 0; wm < mm; ++wm) {
      auto wj = gr.decode(wm);
      cplx acc{0.0, 0.0};
      for (int yp = 0; yp < mp; ++yp) {
        auto yi = gr.decode(yp);
        for (int ym = 0; ym < mm; ++ym) {
          auto yj = gr.decode(ym);
          int sign = 1;
          double th = 0.0;
          std::array<int, 2> zpi{n / 2, n / 2}, zmi{n / 2, n / 2};
          for (int a = 0; a < N; ++a) {
            int jy = yi[a] - n / 2, ky = yj[a] - n / 2;
            int jz = (wi[a] - n / 2) - jy, kz = (wj[a] - n / 2) - ky;
            int wpos = 0, wmom = 0;
            if (jz < -n / 2) {
              jz += n;
              wpos = -1;
            } else if (jz >= n / 2) {
              jz -= n;
              wpos = 1;
            }
            if (kz < -n / 2) {
              kz += n;
              wmom = -1;
            } else if (kz >= n / 2) {
              kz -= n;
              wmom = 1;
            }
            if ((((jy + jz) * wmom + (wj[a] - n / 2) * wpos) & 1) != 0) sign = -sign;
            th += (kPi / n) * (ky * jz - jy * kz);  // (1/2) sigma(Y, Z)
            zpi[a] = jz + n / 2;
            zmi[a] = kz + n / 2;
          }
          if (b != 0.0 && N == 2) {
            double y1 = gr.xpos(yi[0]), y2 = gr.xpos(yi[1]);
            double z1 = gr.xpos(zpi[0]), z2 = gr.xpos(zpi[1]);
            th -= 0.5 * b * (y1 * z2 - y2 * z1);
          }
          acc += double(sign) * Ff.at(yp, ym) * Fg.at(gr.encode(zpi), gr.encode(zmi)) *
                 cplx{std::cos(th), std::sin(th)};
        }
      }
      H.at(wp, wm) = scale * acc;
    }
  }
  return symplectic_fourier(H);
}

}  // namespace

Symbol weyl_compose_b0(const Symbol& f, const Symbol& g) { return twisted_compose(f, g, 0.0); }

Symbol weyl_compose_const_b(const Symbol& f, const Symbol& g, double b) {
  return twisted_compose(f, g, b);
}

Symbol wigner(const PotentialSpec& A, const WaveFunction& u, const WaveFunction& v) {
  const auto& g = *u.grid;
  const int N = g.N(), n = g.n(), mp = g.posCount();
  // Half-step samples of u and v (2n points per position axis).
  const auto& H = g.halfStepInterp();
  int hp = 1;
  for (int a = 0; a < N; ++a) hp *= 2 * n;
  std::vector<cplx> uh(hp), vh(hp);
  if (N == 1) {
    Eigen::Map<const Eigen::VectorXcd> uv(u.v.data(), n), vv(v.v.data(), n);
    Eigen::VectorXcd a = H * uv, bvec = H * vv;
    for (int i = 0; i < 2 * n; ++i) {
      uh[i] = a(i);
      vh[i] = bvec(i);
    }
  } else {
    Eigen::Map<const Eigen::MatrixXcd> U(u.v.data(), n, n);  // column-major: (j2, j1)
    // u index j1*n+j2 -> M(j2, j1); interpolate both axes.
    Eigen::MatrixXcd U2 = H * U.transpose().eval() * H.transpose();  // (p1, p2)
    Eigen::MatrixXcd V2 = H * Eigen::Map<const Eigen::MatrixXcd>(v.v.data(), n, n).transpose().eval() * H.transpose();
    for (int p1 = 0; p1 < 2 * n; ++p1)
      for (int p2 = 0; p2 < 2 * n; ++p2) {
        uh[p1 * 2 * n + p2] = U2(p1, p2);
        vh[p1 * 2 * n + p2] = V2(p1, p2);
      }
  }
  // W[z][t] = gamma^A(z + y/2, z - y/2) u(z - y/2) conj v(z + y/2), with
  // y_t = (t - n/2) dx per axis; then DFT t -> zeta.
  std::vector<cplx> W(static_cast<std::size_t>(mp) * mp);
  for (int zp = 0; zp < mp; ++zp) {
    auto zi = g.decode(zp);
    Point z{g.xpos(zi[0]), N == 2 ? g.xpos(zi[1]) : 0.0};
    for (int t = 0; t < mp; ++t) {
      auto ti = g.decode(t);
      Point y{(ti[0] - n / 2) * g.dx(), N == 2 ? (ti[1] - n / 2) * g.dx() : 0.0};
      Point zp2{z[0] + 0.5 * y[0], z[1] + 0.5 * y[1]};
      Point zm2{z[0] - 0.5 * y[0], z[1] - 0.5 * y[1]};
      double th = -circulation(A, zp2, zm2);
      // Half-grid indices with periodic wrap.
      int i1p = wrap(2 * zi[0] + (ti[0] - n / 2), 2 * n);
      int i1m = wrap(2 * zi[0] - (ti[0] - n / 2), 2 * n);
      std::size_t im, ip;
      if (N == 1) {
        im = i1m;
        ip = i1p;
      } else {
        int i2p = wrap(2 * zi[1] + (ti[1] - n / 2), 2 * n);
        int i2m = wrap(2 * zi[1] - (ti[1] - n / 2), 2 * n);
        im = static_cast<std::size_t>(i1m) * 2 * n + i2m;
        ip = static_cast<std::size_t>(i1p) * 2 * n + i2p;
      }
      W[static_cast<std::size_t>(zp) * mp + t] = cplx{std::cos(th), std::sin(th)} * uh[im] * std::conj(vh[ip]);
    }
  }
  // zeta transform: out(z, zeta) = wX sum_t prod_a e^{i y_{t_a} zeta_a} W[z][t].
  Eigen::MatrixXcd E(n, n);
  for (int k = 0; k < n; ++k)
    for (int t = 0; t < n; ++t) {
      double th = (t - n / 2) * g.dx() * g.xmom(k);
      E(k, t) = cplx{std::cos(th), std::sin(th)};
    }
  Symbol out(u.grid);
  for (int zp = 0; zp < mp; ++zp) {
    if (N == 1) {
      Eigen::Map<const Eigen::VectorXcd> row(&W[static_cast<std::size_t>(zp) * mp], n);
      Eigen::VectorXcd r = E * row;
      for (int k = 0; k < n; ++k) out.at(zp, k) = g.wX() * r(k);
    } else {
      Eigen::Map<const Eigen::MatrixXcd> Wm(&W[static_cast<std::size_t>(zp) * mp], n, n);  // (t2, t1)
      Eigen::MatrixXcd R = E * Wm.transpose().eval() * E.transpose();                      // (k1, k2)
      for (int k1 = 0; k1 < n; ++k1)
        for (int k2 = 0; k2 < n; ++k2) out.at(zp, k1 * n + k2) = g.wX() * R(k1, k2);
    }
  }
  return out;
}

Symbol mag_translate(const PhasePoint& Z, const Symbol& f, const PotentialSpec& A) {
  return mag_translate_pair(Z, PhasePoint{}, f, A);
}

Symbol mag_translate_pair(const PhasePoint& Y, const PhasePoint& Z, const Symbol& f,
                          const PotentialSpec& A) {
  const GridPtr& g = f.grid;
  WeylPhase left = weyl_phase(A, g, -Y);
  WeylPhase right = weyl_phase(A, g, Y - Z);
  OperatorMatrix T = op_weyl(A, f);
  OperatorMatrix out(g);
  out.M = times(times(left, T.M), right);
  return symbol_of(A, out);
}

Symbol mixed_product(const Symbol& F, const Symbol& g) {
  const auto& gr = *F.grid;
  const int N = gr.N(), n = gr.n(), mp = gr.posCount(), mm = gr.momCount();
  Symbol out(F.grid);
  for (int p = 0; p < mp; ++p)
    for (int k = 0; k < mm; ++k) {
      auto ki = gr.decode(k);
      cplx acc{0.0, 0.0};
      for (int l = 0; l < mm; ++l) {
        auto li = gr.decode(l);
        // xi - eta = (k - l) dxi = grid momentum with index k - l + n/2.
        std::array<int, 2> di{wrap(ki[0] - li[0] + n / 2, n), 0};
        if (N == 2) di[1] = wrap(ki[1] - li[1] + n / 2, n);
        int d = gr.encode(di);
        acc += F.at(p, d) * g.at(p, l);
      }
      out.at(p, k) = gr.wMom() * acc;
    }
  return out;
}

Symbol mag_translate_explicit(const PhasePoint& Z, const Symbol& f, const FieldSpec& B) {
  // For B = 0, omega_tilde_P is the discrete convolution unit (mass 1 at
  // xi = 0 under the momentum quadrature), so this reduces to translate.
  Symbol Ot = omega_tilde_P(f.grid, B, {Z.x[0], Z.x[1]});
  return mixed_product(Ot, translate(Z, f));
}

}  // namespace magweyl
