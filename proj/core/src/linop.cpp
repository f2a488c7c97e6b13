#include "chiralwg/linop.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <set>

#include "chiralwg/errors.hpp"

namespace chiralwg {

namespace {
constexpr int kMaxTotalDim = 1024;  // guard against accidental blowup
}

SpaceLayout::SpaceLayout(std::vector<Subsystem> subs) : subsystems_(std::move(subs)) {
  std::set<std::string> seen;
  total_dim_ = 1;
  for (const auto& s : subsystems_) {
    if (s.dim < 1) throw_config("subsystem '" + s.label + "' has nonpositive dimension");
    if (!seen.insert(s.label).second) throw_config("duplicate subsystem label '" + s.label + "'");
    total_dim_ *= s.dim;
    if (total_dim_ > kMaxTotalDim)
      throw_config("total Hilbert-space dimension exceeds guard of " +
                   std::to_string(kMaxTotalDim));
  }
}

bool SpaceLayout::has(const std::string& label) const {
  for (const auto& s : subsystems_)
    if (s.label == label) return true;
  return false;
}

int SpaceLayout::position_of(const std::string& label) const {
  for (std::size_t i = 0; i < subsystems_.size(); ++i)
    if (subsystems_[i].label == label) return static_cast<int>(i);
  throw_config("unknown subsystem label '" + label + "'");
}

int SpaceLayout::dim_of(const std::string& label) const {
  return subsystems_[position_of(label)].dim;
}

Operator kron(const Operator& a, const Operator& b) {
  const Eigen::Index da = a.rows(), db = b.rows();
  if (a.cols() != da || b.cols() != db) throw_config("kron requires square operators");
  if (da * db > kMaxTotalDim) throw_config("kron result exceeds dimension guard");
  Operator out(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < da; ++j) out.block(i * db, j * db, db, db) = a(i, j) * b;
  return out;
}

Operator embed(const Operator& local, const SpaceLayout& layout, const std::string& target) {
  const int pos = layout.position_of(target);
  const auto& subs = layout.subsystems();
  if (local.rows() != subs[pos].dim || local.cols() != subs[pos].dim)
    throw_config("embed: operator dimension does not match subsystem '" + target + "'");
  int before = 1, after = 1;
  for (int i = 0; i < pos; ++i) before *= subs[i].dim;
  for (std::size_t i = pos + 1; i < subs.size(); ++i) after *= subs[i].dim;
  Operator out = local;
  if (before > 1) out = kron(Operator::Identity(before, before), out);
  if (after > 1) out = kron(out, Operator::Identity(after, after));
  return out;
}

Complex expectation(const Operator& rho, const Operator& a) {
  if (rho.rows() != a.rows() || rho.cols() != a.cols())
    throw_config("expectation: dimension mismatch");
  return (rho * a).trace();
}

Operator partial_trace(const Operator& rho, const SpaceLayout& layout,
                       const std::vector<std::string>& keep) {
  if (keep.empty()) throw_config("partial_trace: empty keep set");
  const auto& subs = layout.subsystems();
  const int n = static_cast<int>(subs.size());
  if (rho.rows() != layout.total_dim()) throw_config("partial_trace: dimension mismatch");

  std::vector<bool> kept(n, false);
  for (const auto& label : keep) kept[layout.position_of(label)] = true;

  int keep_dim = 1, trace_dim = 1;
  for (int i = 0; i < n; ++i) (kept[i] ? keep_dim : trace_dim) *= subs[i].dim;

  // Strides of each subsystem index in the full composite index.
  std::vector<int> stride(n, 1);
  for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * subs[i + 1].dim;
  // Strides within the kept (resp. traced) sub-index, original order.
  std::vector<int> keep_stride(n, 0), trace_stride(n, 0);
  int ks = 1, ts = 1;
  for (int i = n - 1; i >= 0; --i) {
    if (kept[i]) {
      keep_stride[i] = ks;
      ks *= subs[i].dim;
    } else {
      trace_stride[i] = ts;
      ts *= subs[i].dim;
    }
  }

  // full index offsets for every (kept, traced) sub-index pair
  std::vector<int> keep_offset(keep_dim, 0), trace_offset(trace_dim, 0);
  for (int i = 0; i < n; ++i) {
    for (int v = 0; v < keep_dim; ++v)
      if (kept[i]) keep_offset[v] += ((v / keep_stride[i]) % subs[i].dim) * stride[i];
    for (int v = 0; v < trace_dim; ++v)
      if (!kept[i]) trace_offset[v] += ((v / trace_stride[i]) % subs[i].dim) * stride[i];
  }

  Operator out = Operator::Zero(keep_dim, keep_dim);
  for (int a = 0; a < keep_dim; ++a)
    for (int b = 0; b < keep_dim; ++b) {
      Complex acc = 0.0;
      for (int t = 0; t < trace_dim; ++t)
        acc += rho(keep_offset[a] + trace_offset[t], keep_offset[b] + trace_offset[t]);
      out(a, b) = acc;
    }
  return out;
}

Operator matrix_exponential(const Operator& a) {
  if (a.rows() != a.cols()) throw_config("matrix_exponential requires a square operator");
  return a.exp();
}

double hermiticity_residual(const Operator& a) {
  double r = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j <= i; ++j) r = std::max(r, std::abs(a(i, j) - std::conj(a(j, i))));
  return r;
}

double min_hermitian_eigenvalue(const Operator& a) {
  Operator h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Operator> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool is_hermitian(const Operator& a, double tol) { return hermiticity_residual(a) <= tol; }

}  // namespace chiralwg
