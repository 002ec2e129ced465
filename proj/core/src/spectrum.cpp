#include "dimersync/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <tuple>

#include "dimersync/error.hpp"

namespace dimersync {

const char* to_string(Band band) {
  return band == Band::plus ? "plus" : "minus";
}

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kExceptionalTolerance = 1e-14;

struct BlockSolution {
  cplx plus;
  cplx minus;
  cplx cos_theta;
  cplx sin_theta;
  cplx theta;
};

// Diagonalizes [[O1, c], [c, O2]] with the orthogonal (not unitary) rotation
// (cos, -sin) -> plus band, (sin, cos) -> minus band.
BlockSolution solve_block(const ChainParams& p, double k, bool strict) {
  const cplx o1 = p.big_omega1().value;
  const cplx o2 = p.big_omega2().value;
  const cplx diff = o1 - o2;
  const double c = 2.0 * p.lambda() * std::cos(0.5 * k);
  const cplx radicand = diff * diff + 4.0 * c * c;
  const double scale =
      std::max(std::norm(diff), 16.0 * p.lambda() * p.lambda());
  if (strict && std::abs(radicand) <= kExceptionalTolerance * scale) {
    std::ostringstream os;
    os << "exceptional point at k=" << k << " (|radicand|="
       << std::abs(radicand) << ") for " << p.describe();
    throw ExceptionalPointError(os.str());
  }
  const cplx root = std::sqrt(radicand);
  BlockSolution s{};
  s.plus = 0.5 * (o1 + o2) + 0.5 * root;
  s.minus = 0.5 * (o1 + o2) - 0.5 * root;

  // Two equivalent forms of the plus eigenvector; keep the better one.
  cplx x1 = c, y1 = s.plus - o1;
  cplx x2 = s.plus - o2, y2 = c;
  const bool first = std::norm(x1) + std::norm(y1) >= std::norm(x2) + std::norm(y2);
  const cplx x = first ? x1 : x2;
  const cplx y = first ? y1 : y2;
  const cplx self_overlap = x * x + y * y;
  const double size = std::norm(x) + std::norm(y);
  if (size == 0.0 || std::abs(self_overlap) <= kExceptionalTolerance * size) {
    std::ostringstream os;
    os << "self-orthogonal eigenvector (exceptional point) at k=" << k
       << " for " << p.describe();
    throw ExceptionalPointError(os.str());
  }
  const cplx norm = std::sqrt(self_overlap);
  s.cos_theta = x / norm;
  s.sin_theta = -y / norm;
  s.theta = cplx{0.0, -1.0} * std::log(s.cos_theta + cplx{0.0, 1.0} * s.sin_theta);
  // theta is defined modulo pi together with an overall sign of the pair.
  if (s.theta.real() > 0.5 * kPi) {
    s.theta -= kPi;
    s.cos_theta = -s.cos_theta;
    s.sin_theta = -s.sin_theta;
  } else if (s.theta.real() <= -0.5 * kPi) {
    s.theta += kPi;
    s.cos_theta = -s.cos_theta;
    s.sin_theta = -s.sin_theta;
  }
  return s;
}

double condition_of(const Vector& v) {
  const double overlap = std::abs(cplx((v.transpose() * v)(0)));
  return v.squaredNorm() / overlap;
}

}  // namespace

void sort_modes(std::vector<EigenMode>& modes) {
  std::stable_sort(modes.begin(), modes.end(),
                   [](const EigenMode& a, const EigenMode& b) {
                     return std::make_tuple(a.decay_rate(), a.frequency(),
                                            static_cast<int>(a.band),
                                            a.momentum_index) <
                            std::make_tuple(b.decay_rate(), b.frequency(),
                                            static_cast<int>(b.band),
                                            b.momentum_index);
                   });
}

std::vector<EigenMode> open_boundary_modes(const ChainParams& params) {
  const int n = params.n_spins();
  const int cells = params.n_cells();
  const double prefactor = std::sqrt(4.0 / (n + 1.0));
  std::vector<EigenMode> modes;
  modes.reserve(static_cast<std::size_t>(n));

  for (int l = 1; l <= cells; ++l) {
    const double k = 2.0 * kPi * l / (n + 1.0);
    const BlockSolution s = solve_block(params, k, true);

    Vector plus(n), minus(n);
    for (int j = 1; j <= cells; ++j) {
      const double sa = std::sin(k * (j - 0.5));
      const double sb = std::sin(k * j);
      plus(2 * (j - 1)) = prefactor * s.cos_theta * sa;
      plus(2 * j - 1) = -prefactor * s.sin_theta * sb;
      minus(2 * (j - 1)) = prefactor * s.sin_theta * sa;
      minus(2 * j - 1) = prefactor * s.cos_theta * sb;
    }
    // The sine sums equal (N+1)/4 exactly; this only removes rounding.
    plus /= std::sqrt(cplx((plus.transpose() * plus)(0)));
    minus /= std::sqrt(cplx((minus.transpose() * minus)(0)));

    modes.push_back({Band::plus, l, k, {s.plus}, s.theta, std::move(plus)});
    modes.push_back({Band::minus, l, k, {s.minus}, s.theta, std::move(minus)});
  }
  return modes;
}

SpectrumReport analytic_spectrum(const ChainParams& params) {
  SpectrumReport report;
  report.modes = open_boundary_modes(params);
  sort_modes(report.modes);
  for (const auto& m : report.modes) {
    report.max_condition =
        std::max(report.max_condition, condition_of(m.site_amplitudes));
  }
  const BandDiagnostics d = band_diagnostics(report);
  report.ratio_21 = d.ratio_21;
  report.ratio_23 = d.ratio_23;
  return report;
}

namespace {
double safe_ratio(double small, double large) {
  if (large <= 0.0) return 1.0;
  return small / large;
}
}  // namespace

BandDiagnostics band_diagnostics(const SpectrumReport& report) {
  const auto& m = report.modes;
  if (m.size() < 2) {
    return {1.0, 1.0, 0.0};
  }
  double plus_min = std::numeric_limits<double>::infinity();
  double minus_min = std::numeric_limits<double>::infinity();
  for (const auto& mode : m) {
    double& slot = mode.band == Band::plus ? plus_min : minus_min;
    slot = std::min(slot, mode.decay_rate());
  }
  return {
      .ratio_21 = safe_ratio(m[0].decay_rate(), m[1].decay_rate()),
      .ratio_23 = safe_ratio(std::min(plus_min, minus_min),
                             std::max(plus_min, minus_min)),
      .slow_gap = std::abs(m[0].frequency() - m[1].frequency()),
  };
}

BandDiagnostics band_diagnostics(const ChainParams& params) {
  if (params.n_spins() < 4) {
    throw ConfigError("band diagnostics need at least 4 spins");
  }
  return band_diagnostics(analytic_spectrum(params));
}

namespace detail {

std::pair<cplx, cplx> band_pair(const ChainParams& params, double k) {
  const BlockSolution s = solve_block(params, k, false);
  return {s.plus, s.minus};
}

Matrix periodic_single_particle_matrix(const ChainParams& params) {
  Matrix m = single_particle_matrix(params);
  const int n = params.n_spins();
  if (n > 2) {
    m(0, n - 1) += params.lambda();
    m(n - 1, 0) += params.lambda();
  } else {
    // One cell: a_0 couples to b_0 both inside the cell and across the wrap.
    m(0, 1) += params.lambda();
    m(1, 0) += params.lambda();
  }
  return m;
}

std::vector<BlochMode> periodic_modes(const ChainParams& params) {
  const int cells = params.n_cells();
  const double norm = 1.0 / std::sqrt(static_cast<double>(cells));
  std::vector<BlochMode> modes;
  for (int l = 0; l < cells; ++l) {
    const double k = 2.0 * kPi * l / cells;
    const BlockSolution s = solve_block(params, k, false);
    Vector plus(2 * cells), minus(2 * cells);
    const cplx half_phase = std::polar(1.0, 0.5 * k);
    for (int j = 0; j < cells; ++j) {
      const cplx phase = std::polar(norm, -k * j);
      plus(2 * j) = s.cos_theta * half_phase * phase;
      plus(2 * j + 1) = -s.sin_theta * phase;
      minus(2 * j) = s.sin_theta * half_phase * phase;
      minus(2 * j + 1) = s.cos_theta * phase;
    }
    modes.push_back({Band::plus, l, k, s.plus, s.theta, std::move(plus)});
    modes.push_back({Band::minus, l, k, s.minus, s.theta, std::move(minus)});
  }
  return modes;
}

}  // namespace detail

}  // namespace dimersync
