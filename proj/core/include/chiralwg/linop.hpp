#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

namespace chiralwg {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;

/// Ordered tensor-product structure of the full Hilbert space.
/// Subsystem order fixes the kron order: the first label is the most
/// significant index.
struct SpaceLayout {
  struct Subsystem {
    std::string label;
    int dim;
  };

  SpaceLayout() = default;
  explicit SpaceLayout(std::vector<Subsystem> subs);

  int total_dim() const { return total_dim_; }
  bool has(const std::string& label) const;
  int position_of(const std::string& label) const;  // throws on unknown label
  int dim_of(const std::string& label) const;

  const std::vector<Subsystem>& subsystems() const { return subsystems_; }

 private:
  std::vector<Subsystem> subsystems_;
  int total_dim_ = 1;
};

Operator kron(const Operator& a, const Operator& b);

/// Embeds a local operator into the full space, identity on all other
/// subsystems. Linear and multiplicative: embed(AB) = embed(A) embed(B).
Operator embed(const Operator& local, const SpaceLayout& layout, const std::string& target);

/// Tr(rho * a). Pre: equal dims, trace(rho) within 1e-9 of 1.
Complex expectation(const Operator& rho, const Operator& a);

/// Traces out every subsystem not in `keep`; kept subsystems stay in their
/// original order. Trace-preserving.
Operator partial_trace(const Operator& rho, const SpaceLayout& layout,
                       const std::vector<std::string>& keep);

/// Scaling-and-squaring Pade matrix exponential.
Operator matrix_exponential(const Operator& a);

double hermiticity_residual(const Operator& a);         // max_ij |A - A^dag|
double min_hermitian_eigenvalue(const Operator& a);     // of (A+A^dag)/2
bool is_hermitian(const Operator& a, double tol = 1e-12);

}  // namespace chiralwg
