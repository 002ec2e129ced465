#include "dimersync/one_excitation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dimersync/error.hpp"

namespace dimersync {

namespace {

void check_site(int site, int n) {
  if (site < 0 || site >= n) {
    throw ConfigError("site index " + std::to_string(site + 1) +
                      " outside a chain of " + std::to_string(n) + " spins");
  }
}

std::string pair_suffix(SitePair p) {
  return std::to_string(p.site + 1) + "_" + std::to_string(p.other + 1);
}

OneExcitationAmplitudes require_one_excitation(const ChainParams& params,
                                               const InitialState& init) {
  auto amps = init.one_excitation_amplitudes(params.n_spins());
  if (!amps) {
    throw ConfigError("initial state '" + init.descriptor() +
                      "' is not confined to the one-excitation sector");
  }
  return *std::move(amps);
}

}  // namespace

CoherenceExpansion::CoherenceExpansion(std::vector<EigenMode> modes,
                                       cplx vacuum,
                                       const std::vector<cplx>& sites)
    : modes_(std::move(modes)), vacuum_(vacuum) {
  const auto n_modes = static_cast<Eigen::Index>(modes_.size());
  const auto n = static_cast<Eigen::Index>(sites.size());
  overlaps_.resize(n_modes);
  u_.resize(n_modes, n);
  const Vector c = Eigen::Map<const Vector>(sites.data(), n);
  for (Eigen::Index l = 0; l < n_modes; ++l) {
    const Vector& k = modes_[static_cast<std::size_t>(l)].site_amplitudes;
    if (k.size() != n) throw DimensionError("mode and state sizes differ");
    overlaps_(l) = (k.transpose() * c)(0);
    u_.row(l) = overlaps_(l) * std::conj(vacuum_) * k.transpose();
  }
}

cplx CoherenceExpansion::lowering(int site, double t) const {
  check_site(site, n_sites());
  cplx acc{0.0, 0.0};
  for (std::size_t l = 0; l < modes_.size(); ++l) {
    acc += u_(static_cast<Eigen::Index>(l), site) *
           std::exp(cplx{0.0, -1.0} * modes_[l].eigenvalue.value * t);
  }
  return acc;
}

Matrix CoherenceExpansion::pair_weights(int site, int other) const {
  check_site(site, n_sites());
  check_site(other, n_sites());
  const auto n_modes = static_cast<Eigen::Index>(modes_.size());
  Matrix w(n_modes, n_modes);
  for (Eigen::Index l = 0; l < n_modes; ++l) {
    const cplx left = overlaps_(l) *
                      modes_[static_cast<std::size_t>(l)].site_amplitudes(other);
    for (Eigen::Index m = 0; m < n_modes; ++m) {
      const cplx right =
          overlaps_(m) * modes_[static_cast<std::size_t>(m)].site_amplitudes(site);
      w(l, m) = left * std::conj(right);
    }
  }
  return w;
}

cplx CoherenceExpansion::raise_lower(int site, int other, double t) const {
  const Matrix w = pair_weights(site, other);
  const auto n_modes = static_cast<Eigen::Index>(modes_.size());
  Vector phase(n_modes);
  for (Eigen::Index l = 0; l < n_modes; ++l) {
    phase(l) = std::exp(cplx{0.0, -1.0} *
                        modes_[static_cast<std::size_t>(l)].eigenvalue.value * t);
  }
  // exp(-i (O_l - conj O_m) t) = phase_l * conj(phase_m).
  return (phase.transpose() * w * phase.conjugate())(0);
}

Eigen::MatrixXd CoherenceExpansion::sample_coherences(
    const TimeGrid& grid) const {
  const auto n_modes = static_cast<Eigen::Index>(modes_.size());
  const auto count = static_cast<Eigen::Index>(grid.count);
  Matrix phases(n_modes, count);
  for (Eigen::Index l = 0; l < n_modes; ++l) {
    const cplx rate = cplx{0.0, -1.0} * modes_[static_cast<std::size_t>(l)].eigenvalue.value;
    for (Eigen::Index i = 0; i < count; ++i) {
      phases(l, i) = std::exp(rate * grid.at(static_cast<std::size_t>(i)));
    }
  }
  return 2.0 * (u_.transpose() * phases).real();
}

CoherenceExpansion coherence_expansion(const ChainParams& params,
                                       const InitialState& init) {
  const auto amps = require_one_excitation(params, init);
  return {analytic_spectrum(params).modes, amps.vacuum, amps.sites};
}

Vector correlation_weights(const std::vector<EigenMode>& modes, int site,
                           int other) {
  Vector v(static_cast<Eigen::Index>(modes.size()));
  for (std::size_t l = 0; l < modes.size(); ++l) {
    const Vector& k = modes[l].site_amplitudes;
    check_site(site, static_cast<int>(k.size()));
    check_site(other, static_cast<int>(k.size()));
    v(static_cast<Eigen::Index>(l)) = k(other) * k(site);
  }
  return v;
}

ModeWeights mode_weights(const ChainParams& params, const InitialState& init,
                         const std::vector<SitePair>& pairs) {
  const CoherenceExpansion expansion = coherence_expansion(params, init);
  ModeWeights out;
  out.modes = expansion.modes();
  out.u = expansion.u();
  out.v.resize(static_cast<Eigen::Index>(out.modes.size()),
               static_cast<Eigen::Index>(pairs.size()));
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    out.w.push_back(expansion.pair_weights(pairs[p].site, pairs[p].other));
    out.v.col(static_cast<Eigen::Index>(p)) =
        correlation_weights(out.modes, pairs[p].site, pairs[p].other);
  }
  return out;
}

Trajectory coherence_evolution(const ChainParams& params,
                               const InitialState& init, const TimeGrid& grid) {
  const CoherenceExpansion expansion = coherence_expansion(params, init);
  const Eigen::MatrixXd x = expansion.sample_coherences(grid);
  Trajectory traj(grid);
  for (int j = 0; j < params.n_spins(); ++j) {
    std::vector<double> row(x.cols());
    Eigen::Map<Eigen::VectorXd>(row.data(), x.cols()) = x.row(j);
    traj.add(Observable::sigma_x(j).label(), std::move(row));
  }
  traj.meta = {{"params", params.describe()},
               {"initial_state", init.descriptor()},
               {"path", "analytic"}};
  return traj;
}

Trajectory correlator_evolution(const ChainParams& params,
                                const InitialState& init, const TimeGrid& grid,
                                SitePair pair) {
  const CoherenceExpansion expansion = coherence_expansion(params, init);
  const Matrix w = expansion.pair_weights(pair.site, pair.other);
  const auto& modes = expansion.modes();
  const auto n_modes = static_cast<Eigen::Index>(modes.size());
  std::vector<double> values(grid.count);
  Vector phase(n_modes);
  for (std::size_t i = 0; i < grid.count; ++i) {
    for (Eigen::Index l = 0; l < n_modes; ++l) {
      phase(l) = std::exp(cplx{0.0, -1.0} *
                          modes[static_cast<std::size_t>(l)].eigenvalue.value *
                          grid.at(i));
    }
    values[i] = 2.0 * (phase.transpose() * w * phase.conjugate())(0).real();
  }
  Trajectory traj(grid);
  traj.add(Observable::sigma_x_pair(pair.site, pair.other).label(),
           std::move(values));
  traj.meta = {{"params", params.describe()},
               {"initial_state", init.descriptor()},
               {"path", "analytic"}};
  return traj;
}

Trajectory two_time_correlation(const ChainParams& params, SitePair pair,
                                const TimeGrid& taus) {
  check_site(pair.site, params.n_spins());
  check_site(pair.other, params.n_spins());
  std::vector<cplx> seed(static_cast<std::size_t>(params.n_spins()), 0.0);
  seed[static_cast<std::size_t>(pair.other)] = 1.0;
  const CoherenceExpansion expansion(analytic_spectrum(params).modes, 1.0, seed);
  std::vector<double> re(taus.count), im(taus.count);
  for (std::size_t i = 0; i < taus.count; ++i) {
    const cplx c = expansion.lowering(pair.site, taus.at(i));
    re[i] = c.real();
    im[i] = c.imag();
  }
  Trajectory traj(taus);
  traj.add("re_" + pair_suffix(pair), std::move(re));
  traj.add("im_" + pair_suffix(pair), std::move(im));
  traj.meta = {{"params", params.describe()}, {"reference_state", "vacuum"}};
  return traj;
}

double lorentzian_sum(const std::vector<SpectralComponent>& components,
                      double nu) {
  double acc = 0.0;
  for (const auto& c : components) {
    const double x = nu + c.nu;
    acc += (c.gamma * c.weight.real() + x * c.weight.imag()) /
           (c.gamma * c.gamma + x * x);
  }
  return acc / (2.0 * std::numbers::pi);
}

std::vector<double> default_nu_grid(const std::vector<EigenMode>& modes,
                                    int points) {
  if (points < 2) throw ConfigError("spectrum grid needs at least 2 points");
  double m = 0.0;
  for (const auto& mode : modes) m = std::max(m, std::abs(mode.frequency()));
  if (m == 0.0) m = 1.0;
  std::vector<double> grid(static_cast<std::size_t>(points));
  const double step = 4.0 * m / (points - 1);
  for (int i = 0; i < points; ++i) {
    grid[static_cast<std::size_t>(i)] = -2.0 * m + step * i;
  }
  return grid;
}

LorentzianSpectrum correlation_spectrum(const ChainParams& params,
                                        SitePair pair,
                                        std::vector<double> nu_grid) {
  check_site(pair.site, params.n_spins());
  check_site(pair.other, params.n_spins());
  const auto modes = analytic_spectrum(params).modes;
  const Vector v = correlation_weights(modes, pair.site, pair.other);
  LorentzianSpectrum s;
  s.pair = pair;
  for (std::size_t l = 0; l < modes.size(); ++l) {
    s.components.push_back({modes[l].frequency(), modes[l].decay_rate(),
                            v(static_cast<Eigen::Index>(l))});
  }
  s.nu_grid = nu_grid.empty() ? default_nu_grid(modes) : std::move(nu_grid);
  s.values.reserve(s.nu_grid.size());
  s.abs_values.reserve(s.nu_grid.size());
  for (double nu : s.nu_grid) {
    s.values.push_back(lorentzian_sum(s.components, nu));
    s.abs_values.push_back(std::abs(s.values.back()));
  }
  return s;
}

int LorentzianSpectrum::count_peaks(double relative) const {
  if (abs_values.size() < 3) return 0;
  const double top = *std::max_element(abs_values.begin(), abs_values.end());
  int peaks = 0;
  for (std::size_t i = 1; i + 1 < abs_values.size(); ++i) {
    const double y = abs_values[i];
    if (y > abs_values[i - 1] && y >= abs_values[i + 1] && y >= relative * top) {
      ++peaks;
    }
  }
  return peaks;
}

}  // namespace dimersync
