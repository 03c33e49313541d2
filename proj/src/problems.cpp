#include "proxmom/problems.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "proxmom/errors.hpp"
#include "proxmom/format.hpp"
#include "proxmom/rng.hpp"

namespace proxmom {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

NonsmoothOracle orthant_indicator() {
  NonsmoothOracle g;
  g.value = [](const Vector& x) { return x.minCoeff() >= 0.0 ? 0.0 : kInf; };
  g.prox = [](const Vector& y, double) { return y.cwiseMax(0.0).eval(); };
  g.is_convex = true;
  return g;
}

NonsmoothOracle zero_function() {
  NonsmoothOracle g;
  g.value = [](const Vector&) { return 0.0; };
  g.prox = [](const Vector& y, double) { return y; };
  g.is_convex = true;
  return g;
}

}  // namespace

double power_iteration(const std::function<Vector(const Vector&)>& apply, int dim, double tol,
                       std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("power_iteration: dim must be >= 1");
  if (!(tol > 0)) throw std::invalid_argument("power_iteration: tol must be positive");
  Rng rng(seed);
  Vector v = rng.unit_vector(dim);
  for (int it = 0; it < 10000; ++it) {
    Vector w = apply(v);
    double nw = w.norm();
    if (nw == 0.0) return 0.0;  // PSD and v'Av = 0 forces Av = 0: zero map or exact null vector
    double lam = v.dot(w);
    if ((w - lam * v).norm() <= tol * lam) return lam;
    v = w / nw;
  }
  throw NumericalError("power_iteration: no convergence within 10000 iterations");
}

double nnpca_lipschitz(const Eigen::MatrixXd& Z, double gamma) {
  if (Z.rows() < 1 || Z.cols() < 1) throw std::invalid_argument("nnpca_lipschitz: empty Z");
  if (!(gamma >= 0)) throw std::invalid_argument("nnpca_lipschitz: gamma must be >= 0");
  auto apply = [&Z](const Vector& v) { return (Z.transpose() * (Z * v)).eval(); };
  return power_iteration(apply, static_cast<int>(Z.cols()), 1e-12, 0x9e3779b97f4a7c15ull) +
         2.0 * gamma;
}

CompositeObjective make_nnpca_objective(const NnpcaInstance& inst) {
  auto data = std::make_shared<NnpcaInstance>(inst);
  int n = static_cast<int>(data->Z.rows());
  int d = static_cast<int>(data->Z.cols());

  SmoothOracle f;
  f.value = [data](const Vector& x) {
    return -0.5 * (data->Z * x).squaredNorm() + data->gamma * x.squaredNorm();
  };
  f.gradient = [data](const Vector& x) {
    return (-(data->Z.transpose() * (data->Z * x)) + 2.0 * data->gamma * x).eval();
  };
  f.component_gradient = [data, n](int i, const Vector& x) {
    if (i < 0 || i >= n) throw std::invalid_argument("nnpca component_gradient: index out of range");
    double zi_x = data->Z.row(i).dot(x);
    return (-static_cast<double>(n) * zi_x * data->Z.row(i).transpose() +
            2.0 * data->gamma * x)
        .eval();
  };
  f.n_components = n;
  f.lipschitz = data->L;

  return {std::move(f), orthant_indicator(), d};
}

std::pair<NnpcaInstance, CompositeObjective> generate_nnpca(int n, int d, double gamma,
                                                            std::uint64_t seed) {
  if (n < 1 || d < 1) throw std::invalid_argument("generate_nnpca: n and d must be >= 1");
  if (!(gamma >= 0)) throw std::invalid_argument("generate_nnpca: gamma must be >= 0");
  Rng rng(seed);
  NnpcaInstance inst;
  inst.Z.resize(n, d);
  for (int i = 0; i < n; ++i) inst.Z.row(i) = rng.unit_vector(d).transpose();
  inst.gamma = gamma;
  inst.L = nnpca_lipschitz(inst.Z, gamma);
  CompositeObjective obj = make_nnpca_objective(inst);
  return {std::move(inst), std::move(obj)};
}

void save_nnpca_instance(const NnpcaInstance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: LF endings everywhere
  if (!out) throw std::invalid_argument("save_nnpca_instance: cannot open " + path);
  out << inst.Z.rows() << ' ' << inst.Z.cols() << ' ' << format_sig17(inst.gamma) << '\n';
  for (Eigen::Index i = 0; i < inst.Z.rows(); ++i) {
    for (Eigen::Index j = 0; j < inst.Z.cols(); ++j) {
      if (j) out << ' ';
      out << format_sig17(inst.Z(i, j));
    }
    out << '\n';
  }
  if (!out) throw std::invalid_argument("save_nnpca_instance: write failed for " + path);
}

NnpcaInstance load_nnpca_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("load_nnpca_instance: cannot open " + path);
  long long n = 0, d = 0;
  double gamma = 0.0;
  if (!(in >> n >> d >> gamma) || n < 1 || d < 1 || !(gamma >= 0))
    throw std::invalid_argument("load_nnpca_instance: bad header in " + path);
  NnpcaInstance inst;
  inst.Z.resize(n, d);
  for (long long i = 0; i < n; ++i)
    for (long long j = 0; j < d; ++j)
      if (!(in >> inst.Z(i, j)))
        throw std::invalid_argument("load_nnpca_instance: truncated data in " + path);
  for (long long i = 0; i < n; ++i) {
    double norm = inst.Z.row(i).norm();
    if (std::abs(norm - 1.0) > 1e-12) {
      std::ostringstream msg;
      msg << "load_nnpca_instance: row " << i << " has norm " << norm << ", expected 1";
      throw std::invalid_argument(msg.str());
    }
  }
  inst.gamma = gamma;
  inst.L = nnpca_lipschitz(inst.Z, gamma);
  return inst;
}

QuadraticProblem quadratic_problem(const std::vector<double>& eigs, std::uint64_t seed) {
  int d = static_cast<int>(eigs.size());
  if (d < 1) throw std::invalid_argument("quadratic_problem: eigs must be nonempty");
  for (double e : eigs)
    if (!(e > 0)) throw std::invalid_argument("quadratic_problem: eigenvalues must be positive");

  Rng rng(seed);
  Eigen::MatrixXd M(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) M(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(M);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
  Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j)
    if (R(j, j) < 0) Q.col(j) = -Q.col(j);
  Q.transposeInPlace();  // rows q_i below

  struct Data {
    Eigen::MatrixXd Q;  // d x d, rows q_i
    Vector eigs;
    Eigen::MatrixXd A;
  };
  auto data = std::make_shared<Data>();
  data->Q = Q;
  data->eigs = Eigen::Map<const Vector>(eigs.data(), d);
  data->A = Q.transpose() * data->eigs.asDiagonal() * Q;

  SmoothOracle f;
  f.value = [data](const Vector& x) { return 0.5 * x.dot(data->A * x); };
  f.gradient = [data](const Vector& x) { return (data->A * x).eval(); };
  f.component_gradient = [data, d](int i, const Vector& x) {
    if (i < 0 || i >= d)
      throw std::invalid_argument("quadratic component_gradient: index out of range");
    double qi_x = data->Q.row(i).dot(x);
    return (static_cast<double>(d) * data->eigs[i] * qi_x * data->Q.row(i).transpose()).eval();
  };
  f.n_components = d;
  f.lipschitz = data->eigs.maxCoeff();

  QuadraticProblem prob;
  prob.objective = {std::move(f), orthant_indicator(), d};
  prob.eigs = data->eigs;
  prob.A = data->A;
  return prob;
}

CompositeObjective quartic_problem(int d, double start_radius) {
  if (d < 1) throw std::invalid_argument("quartic_problem: d must be >= 1");
  if (!(start_radius > 0)) throw std::invalid_argument("quartic_problem: radius must be positive");

  SmoothOracle f;
  f.value = [](const Vector& x) { return x.array().square().square().sum(); };
  f.gradient = [](const Vector& x) { return (4.0 * x.array().cube()).matrix().eval(); };
  f.component_gradient = [d](int i, const Vector& x) {
    if (i < 0 || i >= d)
      throw std::invalid_argument("quartic component_gradient: index out of range");
    Vector g = Vector::Zero(x.size());
    g[i] = 4.0 * d * x[i] * x[i] * x[i];
    return g;
  };
  f.n_components = d;
  f.lipschitz = 12.0 * start_radius * start_radius;

  return {std::move(f), zero_function(), d};
}

}  // namespace proxmom
