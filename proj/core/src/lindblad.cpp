#include "dimersync/lindblad.hpp"

#include "dimersync/error.hpp"

namespace dimersync {

namespace {
bool excited(std::size_t state, int site) { return (state >> site) & 1U; }
}  // namespace

LindbladGenerator::LindbladGenerator(const ChainParams& params)
    : params_(params), dim_(static_cast<Eigen::Index>(params.dim())) {
  k_diag_.resize(static_cast<std::size_t>(dim_));
  for (Eigen::Index a = 0; a < dim_; ++a) {
    const auto s = static_cast<std::size_t>(a);
    cplx diag{0.0, 0.0};
    for (int j = 0; j < params.n_spins(); ++j) {
      const bool up = excited(s, j);
      diag += 0.5 * params.omega(j) * (up ? 1.0 : -1.0);
      if (up) diag -= cplx{0.0, params.gamma(j)};
    }
    k_diag_[s] = diag;
    for (int j = 0; j + 1 < params.n_spins(); ++j) {
      if (excited(s, j) != excited(s, j + 1)) {
        hops_.emplace_back(static_cast<std::uint32_t>(s),
                           static_cast<std::uint32_t>(s ^ (std::size_t{3} << j)));
      }
    }
  }
}

void LindbladGenerator::apply(const Matrix& rho, Matrix& out) const {
  if (rho.rows() != dim_ || rho.cols() != dim_) {
    throw DimensionError("operand dimension does not match the chain");
  }
  out.resize(dim_, dim_);
  const cplx minus_i{0.0, -1.0};
  const double lam = params_.lambda();

  // -i (K rho - rho K^dagger), diagonal part.
  for (Eigen::Index b = 0; b < dim_; ++b) {
    const cplx kb_conj = std::conj(k_diag_[static_cast<std::size_t>(b)]);
    for (Eigen::Index a = 0; a < dim_; ++a) {
      out(a, b) = minus_i * (k_diag_[static_cast<std::size_t>(a)] - kb_conj) *
                  rho(a, b);
    }
  }
  // Hopping part: (K rho)(a,b) += lam rho(a',b); (rho K^dag)(a,b) += lam rho(a,b').
  if (lam != 0.0) {
    const cplx c = minus_i * lam;
    for (Eigen::Index b = 0; b < dim_; ++b) {
      for (const auto& [a, ap] : hops_) {
        out(a, b) += c * rho(ap, b);
      }
    }
    for (const auto& [b, bp] : hops_) {
      out.col(b) -= c * rho.col(bp);
    }
  }
  // Jumps: 2 gamma_j s-_j rho s+_j.
  for (int j = 0; j < params_.n_spins(); ++j) {
    const double g2 = 2.0 * params_.gamma(j);
    if (g2 == 0.0) continue;
    const Eigen::Index bit = Eigen::Index{1} << j;
    for (Eigen::Index b = 0; b < dim_; ++b) {
      if (b & bit) continue;
      for (Eigen::Index a = 0; a < dim_; ++a) {
        if (a & bit) continue;
        out(a, b) += g2 * rho(a | bit, b | bit);
      }
    }
  }
}

void LindbladGenerator::apply_unitary(const Matrix& rho, Matrix& out) const {
  if (rho.rows() != dim_ || rho.cols() != dim_) {
    throw DimensionError("operand dimension does not match the chain");
  }
  out.resize(dim_, dim_);
  const cplx minus_i{0.0, -1.0};
  for (Eigen::Index b = 0; b < dim_; ++b) {
    const double eb = k_diag_[static_cast<std::size_t>(b)].real();
    for (Eigen::Index a = 0; a < dim_; ++a) {
      out(a, b) = minus_i * (k_diag_[static_cast<std::size_t>(a)].real() - eb) *
                  rho(a, b);
    }
  }
  const cplx c = minus_i * params_.lambda();
  if (params_.lambda() != 0.0) {
    for (Eigen::Index b = 0; b < dim_; ++b) {
      for (const auto& [a, ap] : hops_) out(a, b) += c * rho(ap, b);
    }
    for (const auto& [b, bp] : hops_) out.col(b) -= c * rho.col(bp);
  }
}

}  // namespace dimersync
