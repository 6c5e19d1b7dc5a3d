#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

#include "json.hpp"

namespace matspec {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kPsdEigTol = 1e-12;

inline bool is_hermitian(const Matrix& a, double tol = 1e-10) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol * (1.0 + a.cwiseAbs().maxCoeff());
}

// Symmetrize away rounding drift; diagonal becomes exactly real.
inline Matrix hermitian_part(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

inline double frobenius_norm(const Matrix& a) { return a.norm(); }

struct NormsAndEigs {
  double frobenius = 0.0;
  double trace_norm = 0.0;
  Vector eigenvalues;  // ascending
};

inline NormsAndEigs norms_and_eigs(const Matrix& a) {
  if (!is_hermitian(a)) throw std::domain_error("norms_and_eigs: input not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(a), Eigen::EigenvaluesOnly);
  NormsAndEigs out;
  out.eigenvalues = es.eigenvalues();
  out.frobenius = a.norm();
  out.trace_norm = out.eigenvalues.cwiseAbs().sum();
  return out;
}

// Unique Hpsd square root by eigendecomposition. Eigenvalues in
// [-kPsdEigTol, 0] are clamped to zero; anything more negative is an error.
inline Matrix hpd_sqrt(const Matrix& z) {
  if (!is_hermitian(z)) throw std::domain_error("hpd_sqrt: input not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(z));
  Vector ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  for (int i = 0; i < ev.size(); ++i) {
    if (ev[i] < -kPsdEigTol * scale) throw std::domain_error("hpd_sqrt: input not positive semidefinite");
    ev[i] = std::sqrt(std::max(0.0, ev[i]));
  }
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

inline bool is_hpsd(const Matrix& z, double tol = kPsdEigTol) {
  if (!is_hermitian(z)) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(z), Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  return es.eigenvalues()(0) >= -tol * scale;
}

inline bool is_hpd(const Matrix& z) {
  if (!is_hermitian(z)) return false;
  Eigen::LLT<Matrix> llt(hermitian_part(z));
  return llt.info() == Eigen::Success;
}

// The algebra isomorphism A -> [[Re A, -Im A], [Im A, Re A]].
inline RealMatrix complex_to_real_block(const Matrix& a) {
  const auto d = a.rows();
  RealMatrix b(2 * d, 2 * d);
  b.topLeftCorner(d, d) = a.real();
  b.topRightCorner(d, d) = -a.imag();
  b.bottomLeftCorner(d, d) = a.imag();
  b.bottomRightCorner(d, d) = a.real();
  return b;
}

// Serialization always carries both triangles: {"d": int, "re": [[..]], "im": [[..]]}.
inline nlohmann::json matrix_to_json(const Matrix& a) {
  const auto d = a.rows();
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (Eigen::Index i = 0; i < d; ++i) {
    nlohmann::json rrow = nlohmann::json::array(), irow = nlohmann::json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      rrow.push_back(a(i, j).real());
      irow.push_back(a(i, j).imag());
    }
    re.push_back(rrow);
    im.push_back(irow);
  }
  return {{"d", d}, {"re", re}, {"im", im}};
}

inline Matrix matrix_from_json(const nlohmann::json& j) {
  const int d = j.at("d").get<int>();
  Matrix a(d, d);
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) a(r, c) = Complex(re.at(r).at(c).get<double>(), im.at(r).at(c).get<double>());
  return a;
}

}  // namespace matspec
