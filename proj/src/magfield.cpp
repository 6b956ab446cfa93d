#include "magweyl/magfield.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include <json.hpp>

namespace magweyl {

using nlohmann::json;

const QuadRule& gauss_legendre(int n) {
  static std::map<int, QuadRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  QuadRule r;
  r.x.resize(n);
  r.w.resize(n);
  // Newton iteration on Legendre P_n, standard cosine initial guesses.
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dxn = p1 / dp;
      x -= dxn;
      if (std::abs(dxn) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    double dp = n * (x * p1 - p0) / (x * x - 1.0);
    r.x[i] = x;
    r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(n, std::move(r)).first->second;
}

double FieldSpec::B12(const Point& x) const {
  switch (kind) {
    case Kind::Zero:
      return 0.0;
    case Kind::Constant:
      return b;
    case Kind::Linear:
      return b + grad[0] * x[0] + grad[1] * x[1];
    case Kind::Bump: {
      double d0 = x[0] - center[0], d1 = x[1] - center[1];
      return b * std::exp(-(d0 * d0 + d1 * d1) / (2.0 * sigma * sigma));
    }
  }
  return 0.0;
}

double FieldSpec::component(int j, int k, const Point& x) const {
  if (N == 1 || j == k) return 0.0;
  double v = B12(x);
  return j == 0 ? v : -v;
}

double RhoSpec::operator()(const Point& x) const {
  return c0 + c[0] * x[0] + c[1] * x[1] + q11 * x[0] * x[0] + q12 * x[0] * x[1] + q22 * x[1] * x[1];
}

Point RhoSpec::grad(const Point& x) const {
  return {c[0] + 2.0 * q11 * x[0] + q12 * x[1], c[1] + q12 * x[0] + 2.0 * q22 * x[1]};
}

RhoSpec RhoSpec::operator+(const RhoSpec& o) const {
  return {c0 + o.c0, {c[0] + o.c[0], c[1] + o.c[1]}, q11 + o.q11, q12 + o.q12, q22 + o.q22};
}

bool RhoSpec::trivial() const {
  return c[0] == 0.0 && c[1] == 0.0 && q11 == 0.0 && q12 == 0.0 && q22 == 0.0;
}

PotentialSpec PotentialSpec::zero(int N) {
  PotentialSpec A;
  A.N = N;
  A.gauge = Gauge::Zero;
  A.field = FieldSpec::zero(N);
  return A;
}

PotentialSpec PotentialSpec::symmetric(double b) {
  PotentialSpec A;
  A.gauge = Gauge::Symmetric;
  A.field = FieldSpec::constant(b);
  return A;
}

PotentialSpec PotentialSpec::landau(double b) {
  PotentialSpec A;
  A.gauge = Gauge::Landau;
  A.field = FieldSpec::constant(b);
  return A;
}

Point PotentialSpec::eval(const Point& x) const {
  Point a{0.0, 0.0};
  switch (gauge) {
    case Gauge::Zero:
      break;
    case Gauge::Symmetric:
      a = {-0.5 * field.b * x[1], 0.5 * field.b * x[0]};
      break;
    case Gauge::Landau:
      a = {-field.b * x[1], 0.0};
      break;
    case Gauge::Transversal: {
      // A_j(x) = -sum_k x_k int_0^1 s B_jk(s x) ds.
      int nq = field.polynomial() ? 8 : 24;
      const auto& q = gauss_legendre(nq);
      double I = 0.0;  // int_0^1 s B12(s x) ds
      for (int i = 0; i < nq; ++i) {
        double s = 0.5 * (q.x[i] + 1.0);
        I += 0.5 * q.w[i] * s * field.B12({s * x[0], s * x[1]});
      }
      a = {-I * x[1], I * x[0]};
      break;
    }
  }
  if (!rho.trivial()) {
    Point g = rho.grad(x);
    a[0] += g[0];
    a[1] += g[1];
  }
  return a;
}

FieldSpec PotentialSpec::fieldOf() const {
  if (gauge == Gauge::Zero) return FieldSpec::zero(N);
  return field;
}

PotentialSpec transversal_gauge(const FieldSpec& B) {
  PotentialSpec A;
  A.N = B.N;
  A.gauge = PotentialSpec::Gauge::Transversal;
  A.field = B;
  return A;
}

PotentialSpec gauge_shift(const PotentialSpec& A, const RhoSpec& rho) {
  PotentialSpec B = A;
  B.rho = B.rho + rho;
  return B;
}

double flux_triangle(const FieldSpec& B, const Point& a, const Point& b, const Point& c) {
  if (B.N == 1 || B.kind == FieldSpec::Kind::Zero) return 0.0;
  double u0 = b[0] - a[0], u1 = b[1] - a[1];
  double v0 = c[0] - a[0], v1 = c[1] - a[1];
  double J = u0 * v1 - u1 * v0;  // twice the signed area
  switch (B.kind) {
    case FieldSpec::Kind::Constant:
      return 0.5 * B.b * J;
    case FieldSpec::Kind::Linear: {
      // Affine integrand: simplex average = value at the centroid.
      Point ctr{(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0};
      return 0.5 * B.B12(ctr) * J;
    }
    default:
      break;
  }
  // Tensor Gauss rule mapped to the simplex via s = u, t = v (1 - u).
  const int nq = 24;
  const auto& q = gauss_legendre(nq);
  double acc = 0.0;
  for (int i = 0; i < nq; ++i) {
    double u = 0.5 * (q.x[i] + 1.0), wu = 0.5 * q.w[i];
    for (int j = 0; j < nq; ++j) {
      double v = 0.5 * (q.x[j] + 1.0), wv = 0.5 * q.w[j];
      double s = u, t = v * (1.0 - u);
      Point p{a[0] + s * u0 + t * v0, a[1] + s * u1 + t * v1};
      acc += wu * wv * (1.0 - u) * B.B12(p);
    }
  }
  return acc * J;
}

double circulation(const PotentialSpec& A, const Point& x, const Point& y) {
  double d0 = y[0] - x[0], d1 = y[1] - x[1];
  double rhoPart = A.rho(y) - A.rho(x);
  switch (A.gauge) {
    // Midpoint rule is exact for potentials linear in x.
    case PotentialSpec::Gauge::Zero:
      return rhoPart;
    case PotentialSpec::Gauge::Symmetric:
      return 0.5 * A.field.b * (0.5 * (x[0] + y[0]) * d1 - 0.5 * (x[1] + y[1]) * d0) + rhoPart;
    case PotentialSpec::Gauge::Landau:
      return -A.field.b * 0.5 * (x[1] + y[1]) * d0 + rhoPart;
    default:
      break;
  }
  int nq = !A.field.polynomial() ? 24 : 8;
  const auto& q = gauss_legendre(nq);
  double acc = 0.0;
  PotentialSpec base = A;
  base.rho = RhoSpec{};  // gradient part handled exactly below
  for (int i = 0; i < nq; ++i) {
    double t = 0.5 * (q.x[i] + 1.0);
    Point p{x[0] + t * d0, x[1] + t * d1};
    Point a = base.eval(p);
    acc += 0.5 * q.w[i] * (a[0] * d0 + a[1] * d1);
  }
  return acc + (A.rho(y) - A.rho(x));
}

cplx omega_cocycle(const FieldSpec& B, const PhasePoint& X, const PhasePoint& Y, const Point& z) {
  Point p1{z[0] + X.x[0], z[1] + X.x[1]};
  Point p2{p1[0] + Y.x[0], p1[1] + Y.x[1]};
  double th = -flux_triangle(B, z, p1, p2);
  return {std::cos(th), std::sin(th)};
}

cplx big_omega_cocycle(const FieldSpec& B, const PhasePoint& X, const PhasePoint& Y, const Point& z) {
  double th = 0.5 * sigma(X, Y);
  return cplx{std::cos(th), std::sin(th)} * omega_cocycle(B, X, Y, z);
}

double flux_parallelogram(const FieldSpec& B, const Point& x, const Point& y, const Point& z) {
  if (B.N == 1 || B.kind == FieldSpec::Kind::Zero) return 0.0;
  double cross = y[0] * z[1] - y[1] * z[0];
  if (cross == 0.0) return 0.0;
  // sum_{j,k} y_j z_k B_jk = (y1 z2 - y2 z1) B12, averaged over the (s,t) box.
  switch (B.kind) {
    case FieldSpec::Kind::Constant:
      return cross * B.b;
    case FieldSpec::Kind::Linear:
      // Affine: box average = value at the box center (s, t) = (0, -1/2).
      return cross * B.B12({x[0] - 0.5 * z[0], x[1] - 0.5 * z[1]});
    default:
      break;
  }
  const int nq = 24;
  const auto& q = gauss_legendre(nq);
  double acc = 0.0;
  for (int i = 0; i < nq; ++i) {
    double s = 0.5 * q.x[i];  // [-1/2, 1/2]
    for (int j = 0; j < nq; ++j) {
      double t = 0.5 * (q.x[j] - 1.0);  // [-1, 0]
      acc += 0.25 * q.w[i] * q.w[j] * B.B12({x[0] + s * y[0] + t * z[0], x[1] + s * y[1] + t * z[1]});
    }
  }
  return cross * acc;
}

Symbol omega_tilde_P(const GridPtr& g, const FieldSpec& B, const Point& z) {
  const int N = g->N(), m = g->posCount();
  const double norm = g->wX() * std::pow(2.0 * kPi, -N);
  Symbol out(g);
  for (int p = 0; p < m; ++p) {
    auto pj = g->decode(p);
    Point x{g->xpos(pj[0]), N == 2 ? g->xpos(pj[1]) : 0.0};
    for (int k = 0; k < m; ++k) {
      cplx acc{0.0, 0.0};
      auto mk = g->decode(k);
      std::array<double, 2> xi{g->xmom(mk[0]), N == 2 ? g->xmom(mk[1]) : 0.0};
      for (int yi = 0; yi < m; ++yi) {
        auto yj = g->decode(yi);
        Point y{g->xpos(yj[0]), N == 2 ? g->xpos(yj[1]) : 0.0};
        // The parallelogram is traversed with the orientation that matches
        // the cocycle conventions used by the Weyl system: +flux here.
        double th = -(y[0] * xi[0] + y[1] * xi[1]) + flux_parallelogram(B, x, y, z);
        acc += cplx{std::cos(th), std::sin(th)};
      }
      out.at(p, k) = norm * acc;
    }
  }
  return out;
}

std::string field_to_config(const FieldSpec& B) {
  json j;
  j["N"] = B.N;
  switch (B.kind) {
    case FieldSpec::Kind::Zero:
      j["kind"] = "zero";
      break;
    case FieldSpec::Kind::Constant:
      j["kind"] = "constant";
      j["b"] = B.b;
      break;
    case FieldSpec::Kind::Linear:
      j["kind"] = "linear";
      j["b"] = B.b;
      j["grad"] = {B.grad[0], B.grad[1]};
      break;
    case FieldSpec::Kind::Bump:
      j["kind"] = "bump";
      j["b"] = B.b;
      j["sigma"] = B.sigma;
      j["center"] = {B.center[0], B.center[1]};
      break;
  }
  return j.dump();
}

FieldSpec field_from_config(const std::string& text) {
  json j = json::parse(text);
  std::string kind = j.value("kind", "zero");
  int N = j.value("N", 2);
  if (kind == "zero") return FieldSpec::zero(N);
  if (kind == "constant") return FieldSpec::constant(j.at("b").get<double>());
  if (kind == "linear") {
    auto g = j.value("grad", std::vector<double>{0.0, 0.0});
    return FieldSpec::linear(j.value("b", 0.0), g.at(0), g.at(1));
  }
  if (kind == "bump") {
    auto c = j.value("center", std::vector<double>{0.0, 0.0});
    return FieldSpec::bump(j.at("b").get<double>(), j.value("sigma", 1.0), {c.at(0), c.at(1)});
  }
  throw std::invalid_argument("field_from_config: unknown kind " + kind);
}

std::string potential_to_config(const PotentialSpec& A) {
  json j;
  j["N"] = A.N;
  switch (A.gauge) {
    case PotentialSpec::Gauge::Zero:
      j["gauge"] = "zero";
      break;
    case PotentialSpec::Gauge::Symmetric:
      j["gauge"] = "symmetric";
      j["b"] = A.field.b;
      break;
    case PotentialSpec::Gauge::Landau:
      j["gauge"] = "landau";
      j["b"] = A.field.b;
      break;
    case PotentialSpec::Gauge::Transversal:
      j["gauge"] = "transversal";
      j["field"] = json::parse(field_to_config(A.field));
      break;
  }
  if (!A.rho.trivial() || A.rho.c0 != 0.0) {
    j["rho"] = {{"c0", A.rho.c0}, {"c", {A.rho.c[0], A.rho.c[1]}}, {"q", {A.rho.q11, A.rho.q12, A.rho.q22}}};
  }
  return j.dump();
}

PotentialSpec potential_from_config(const std::string& text) {
  json j = json::parse(text);
  std::string gauge = j.value("gauge", "zero");
  PotentialSpec A;
  if (gauge == "zero")
    A = PotentialSpec::zero(j.value("N", 2));
  else if (gauge == "symmetric")
    A = PotentialSpec::symmetric(j.at("b").get<double>());
  else if (gauge == "landau")
    A = PotentialSpec::landau(j.at("b").get<double>());
  else if (gauge == "transversal")
    A = transversal_gauge(field_from_config(j.at("field").dump()));
  else
    throw std::invalid_argument("potential_from_config: unknown gauge " + gauge);
  if (j.contains("rho")) {
    const auto& r = j["rho"];
    RhoSpec rho;
    rho.c0 = r.value("c0", 0.0);
    auto c = r.value("c", std::vector<double>{0.0, 0.0});
    rho.c = {c.at(0), c.at(1)};
    auto q = r.value("q", std::vector<double>{0.0, 0.0, 0.0});
    rho.q11 = q.at(0);
    rho.q12 = q.at(1);
    rho.q22 = q.at(2);
    A.rho = rho;
  }
  return A;
}

}  // namespace magweyl
