// Copyright 2026 The qpctl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qpctl/process_state.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

namespace qpctl {

ProcessMatrix::ProcessMatrix(BasisPtr basis, CMatrix data)
    : basis_(std::move(basis)), data_(std::move(data)) {
  if (!basis_) throw Error("ProcessMatrix: null basis");
  if (data_.rows() != basis_->size() || data_.cols() != basis_->size()) {
    throw DimensionMismatch(fmt::format("ProcessMatrix: expected {0}x{0} data, got {1}x{2}",
                                        basis_->size(), data_.rows(), data_.cols()));
  }
}

ProcessMatrix ProcessMatrix::in_basis(const BasisPtr& target) const {
  if (basis_->same_as(*target)) return ProcessMatrix(target, data_);
  return ProcessMatrix(target, basis_change(*basis_, *target).apply(data_));
}

ValidationReport validate(const ProcessMatrix& chi, const ValidationTolerances& tol) {
  ValidationReport report;
  const CMatrix& m = chi.data();
  const double n = chi.dim();
  report.hermiticity_error = max_abs(m - m.adjoint());
  report.trace_error = std::abs(m.trace() - Complex(n));
  const CMatrix herm = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(herm, Eigen::EigenvaluesOnly);
  report.min_eigenvalue = eig.eigenvalues().minCoeff();
  report.purity_excess = hs_norm2(m) - n * n;

  // Written as negated passes so NaN fails every check.
  if (!m.allFinite()) {
    report.failure = "non-finite entries";
  } else if (!(report.hermiticity_error < tol.hermiticity)) {
    report.failure = fmt::format("hermiticity error {:.3e}", report.hermiticity_error);
  } else if (!(report.trace_error < tol.trace)) {
    report.failure = fmt::format("trace error {:.3e}", report.trace_error);
  } else if (!(report.min_eigenvalue > tol.min_eigenvalue)) {
    report.failure = fmt::format("min eigenvalue {:.3e}", report.min_eigenvalue);
  } else if (!(report.purity_excess <= tol.purity_slack)) {
    report.failure = fmt::format("Tr[chi^2] exceeds N^2 by {:.3e}", report.purity_excess);
  }
  report.ok = report.failure.empty();
  return report;
}

ProcessMatrix chi_from_unitary(const CMatrix& u, const BasisPtr& basis) {
  if (u.rows() != basis->dim() || u.cols() != basis->dim()) {
    throw DimensionMismatch("chi_from_unitary: unitary does not match basis dimension");
  }
  if (!is_unitary(u, 1e-10)) throw DomainError("chi_from_unitary: input is not unitary");
  const int n2 = basis->size();
  CVector coeff(n2);
  for (int l = 0; l < n2; ++l) coeff(l) = (u * (*basis)[l].adjoint()).trace();
  return ProcessMatrix(basis, coeff * coeff.adjoint());
}

ProcessMatrix initial_process(const BasisPtr& basis) {
  return chi_from_unitary(CMatrix::Identity(basis->dim(), basis->dim()), basis);
}

CMatrix choi_state(const ProcessMatrix& chi) {
  const CMatrix logical = chi.in_basis(logical_basis(chi.dim())).data();
  return logical / static_cast<double>(chi.dim());
}

ProcessMatrix from_choi_state(const CMatrix& rho, const BasisPtr& basis) {
  ProcessMatrix logical(logical_basis(basis->dim()), rho * static_cast<double>(basis->dim()));
  return logical.in_basis(basis);
}

double purity(const ProcessMatrix& chi) {
  const double n = chi.dim();
  return hs_norm2(chi.data()) / (n * n);
}

double coherence_l1(const ProcessMatrix& chi) {
  const CMatrix rho = choi_state(chi);
  double off = 0.0;
  for (Eigen::Index p = 0; p < rho.rows(); ++p) {
    for (Eigen::Index q = 0; q < rho.cols(); ++q) {
      if (p != q) off += std::abs(rho(p, q));
    }
  }
  const double n = chi.dim();
  return off / (n * n - 1.0);
}

BlochVector bloch_decompose(const ProcessMatrix& chi) {
  const auto outer = gell_mann_basis(chi.basis().size());
  const int count = outer->size() - 1;
  BlochVector bloch{RVector(count), chi.dim()};
  for (int a = 0; a < count; ++a) bloch.r(a) = hs_inner((*outer)[a], chi.data()).real();
  return bloch;
}

ProcessMatrix bloch_reconstruct(const BlochVector& bloch, const BasisPtr& basis) {
  const int n2 = basis->size();
  const auto outer = gell_mann_basis(n2);
  if (bloch.r.size() != outer->size() - 1) {
    throw DimensionMismatch("bloch_reconstruct: vector length does not match basis");
  }
  CMatrix m = CMatrix::Identity(n2, n2) / static_cast<double>(basis->dim());
  for (int a = 0; a < bloch.r.size(); ++a) m += bloch.r(a) * (*outer)[a];
  return ProcessMatrix(basis, std::move(m));
}

void write_process(std::ostream& out, const ProcessMatrix& chi) {
  out << fmt::format("# qpctl-process dim={} basis={}\n", chi.dim(), to_string(chi.basis().kind()));
  const CMatrix& m = chi.data();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      out << fmt::format("{}{:.17g},{:.17g}", j == 0 ? "" : " ", m(i, j).real(), m(i, j).imag());
    }
    out << '\n';
  }
}

namespace {

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(fmt::format("read_process: bad number '{}'", text));
  }
  return value;
}

}  // namespace

ProcessMatrix read_process(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw Error("read_process: empty input");
  int dim = 0;
  char kind[32] = {};
  if (std::sscanf(header.c_str(), "# qpctl-process dim=%d basis=%31s", &dim, kind) != 2) {
    throw Error("read_process: malformed header '" + header + "'");
  }
  const std::string kind_name(kind);
  BasisPtr basis;
  if (kind_name == "gellmann") {
    basis = gell_mann_basis(dim);
  } else if (kind_name == "logical") {
    basis = logical_basis(dim);
  } else {
    throw Error("read_process: unknown basis '" + kind_name + "'");
  }
  const int n2 = basis->size();
  CMatrix m(n2, n2);
  std::string line;
  for (int i = 0; i < n2; ++i) {
    if (!std::getline(in, line)) throw Error(fmt::format("read_process: missing row {}", i));
    std::istringstream row(line);
    std::string cell;
    for (int j = 0; j < n2; ++j) {
      if (!(row >> cell)) throw Error(fmt::format("read_process: row {} too short", i));
      const auto comma = cell.find(',');
      if (comma == std::string::npos) throw Error("read_process: entry missing ','");
      const std::string_view view(cell);
      m(i, j) = Complex(parse_double(view.substr(0, comma)), parse_double(view.substr(comma + 1)));
    }
  }
  return ProcessMatrix(basis, std::move(m));
}

}  // namespace qpctl
