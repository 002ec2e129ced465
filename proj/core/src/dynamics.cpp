#include "dimersync/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "dimersync/error.hpp"
#include "dimersync/lindblad.hpp"

namespace dimersync {

// --- DensityMatrix ----------------------------------------------------------

DensityMatrix::DensityMatrix(Matrix rho) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols()) throw DimensionError("density matrix not square");
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
    throw ConfigError("density matrix is not Hermitian");
  }
  if (std::abs(rho_.trace() - cplx{1.0, 0.0}) > 1e-9) {
    throw ConfigError("density matrix trace differs from 1");
  }
  const Matrix herm = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -1e-8) {
    throw ConfigError("density matrix is not positive semidefinite");
  }
}

DensityMatrix DensityMatrix::from_pure(const Vector& psi) {
  return DensityMatrix(psi * psi.adjoint());
}

// --- InitialState ---------------------------------------------------------

namespace {

constexpr double kNormTolerance = 1e-12;

std::string format_amplitude(cplx c) {
  std::ostringstream os;
  os.precision(17);
  os << c.real();
  if (c.imag() != 0.0) os << (c.imag() < 0 ? "" : "+") << c.imag() << "i";
  return os.str();
}

}  // namespace

InitialState InitialState::vacuum() { return {Vacuum{}, "vacuum"}; }

InitialState InitialState::product_plus() {
  return {ProductPlus{}, "product_plus"};
}

InitialState InitialState::one_excitation(cplx vacuum, std::vector<cplx> sites) {
  double norm = std::norm(vacuum);
  for (cplx c : sites) norm += std::norm(c);
  if (std::abs(norm - 1.0) > kNormTolerance) {
    throw ConfigError("one-excitation amplitudes are not normalized (norm^2 = " +
                      std::to_string(norm) + ")");
  }
  std::ostringstream os;
  os << "one_excitation(" << format_amplitude(vacuum);
  for (cplx c : sites) os << ";" << format_amplitude(c);
  os << ")";
  return {OneExcitationAmplitudes{vacuum, std::move(sites)}, os.str()};
}

InitialState InitialState::pair_superposition(int n_spins, int site_a,
                                              int site_b) {
  if (site_a < 0 || site_b < 0 || site_a >= n_spins || site_b >= n_spins ||
      site_a == site_b) {
    throw ConfigError("pair superposition needs two distinct sites in the chain");
  }
  std::vector<cplx> c(static_cast<std::size_t>(n_spins), 0.0);
  c[static_cast<std::size_t>(site_a)] = 0.5;
  c[static_cast<std::size_t>(site_b)] = 0.5;
  InitialState s = one_excitation(std::sqrt(0.5), std::move(c));
  s.descriptor_ = "pair(" + std::to_string(site_a + 1) + "," +
                  std::to_string(site_b + 1) + ")";
  return s;
}

InitialState InitialState::uniform_superposition(int n_spins) {
  const double a = 1.0 / std::sqrt(2.0 * n_spins);
  InitialState s = one_excitation(
      std::sqrt(0.5), std::vector<cplx>(static_cast<std::size_t>(n_spins), a));
  s.descriptor_ = "uniform";
  return s;
}

InitialState InitialState::state_vector(Vector psi) {
  if (std::abs(psi.squaredNorm() - 1.0) > kNormTolerance) {
    throw ConfigError("state vector is not normalized");
  }
  return {std::move(psi), "state_vector"};
}

Vector InitialState::vector(int n_spins) const {
  const Eigen::Index dim = Eigen::Index{1} << n_spins;
  return std::visit(
      [&](const auto& p) -> Vector {
        using T = std::decay_t<decltype(p)>;
        Vector psi = Vector::Zero(dim);
        if constexpr (std::is_same_v<T, Vacuum>) {
          psi(0) = 1.0;
        } else if constexpr (std::is_same_v<T, ProductPlus>) {
          psi.setConstant(std::pow(0.5, 0.5 * n_spins));
        } else if constexpr (std::is_same_v<T, OneExcitationAmplitudes>) {
          if (static_cast<int>(p.sites.size()) != n_spins) {
            throw DimensionError("initial state has " +
                                 std::to_string(p.sites.size()) +
                                 " site amplitudes, chain has " +
                                 std::to_string(n_spins));
          }
          psi(0) = p.vacuum;
          for (int j = 0; j < n_spins; ++j) {
            psi(Eigen::Index{1} << j) = p.sites[static_cast<std::size_t>(j)];
          }
        } else {
          if (p.size() != dim) {
            throw DimensionError("state vector dimension does not match chain");
          }
          psi = p;
        }
        return psi;
      },
      payload_);
}

DensityMatrix InitialState::density_matrix(int n_spins) const {
  return DensityMatrix::from_pure(vector(n_spins));
}

std::optional<OneExcitationAmplitudes> InitialState::one_excitation_amplitudes(
    int n_spins) const {
  if (std::holds_alternative<ProductPlus>(payload_)) return std::nullopt;
  const Vector psi = vector(n_spins);
  OneExcitationAmplitudes out{psi(0), {}};
  double outside = 0.0;
  for (Eigen::Index a = 1; a < psi.size(); ++a) {
    if (std::popcount(static_cast<std::uint64_t>(a)) == 1) {
      out.sites.push_back(psi(a));
    } else {
      outside += std::norm(psi(a));
    }
  }
  if (outside > kNormTolerance) return std::nullopt;
  return out;
}

// --- observables ----------------------------------------------------------

std::string Observable::label() const {
  const auto s = std::to_string(site + 1);
  const auto o = std::to_string(other + 1);
  switch (kind) {
    case Kind::sx: return "sx_" + s;
    case Kind::sy: return "sy_" + s;
    case Kind::sz: return "sz_" + s;
    case Kind::population: return "n_" + s;
    case Kind::sxsx: return "sxsx_" + s + "_" + o;
    case Kind::spsm_re: return "spsm_re_" + s + "_" + o;
    case Kind::spsm_im: return "spsm_im_" + s + "_" + o;
  }
  return {};
}

Observable Observable::parse(std::string_view label) {
  auto fail = [&] {
    return ConfigError("unknown observable label '" + std::string(label) + "'");
  };
  const auto us = label.rfind('_');
  if (us == std::string_view::npos) throw fail();
  auto to_int = [&](std::string_view s) {
    int v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || v < 1) throw fail();
    return v - 1;
  };
  struct Prefix {
    std::string_view name;
    Kind kind;
    bool pair;
  };
  constexpr Prefix prefixes[] = {
      {"sxsx_", Kind::sxsx, true},       {"spsm_re_", Kind::spsm_re, true},
      {"spsm_im_", Kind::spsm_im, true}, {"sx_", Kind::sx, false},
      {"sy_", Kind::sy, false},          {"sz_", Kind::sz, false},
      {"n_", Kind::population, false},
  };
  for (const auto& p : prefixes) {
    if (!label.starts_with(p.name)) continue;
    const auto rest = label.substr(p.name.size());
    if (p.pair) {
      const auto sep = rest.find('_');
      if (sep == std::string_view::npos) throw fail();
      return {p.kind, to_int(rest.substr(0, sep)), to_int(rest.substr(sep + 1))};
    }
    return {p.kind, to_int(rest)};
  }
  throw fail();
}

cplx lowering_expectation(const Matrix& rho, int site) {
  const Eigen::Index bit = Eigen::Index{1} << site;
  cplx acc{0.0, 0.0};
  for (Eigen::Index b = 0; b < rho.rows(); ++b) {
    if (b & bit) acc += rho(b, b ^ bit);
  }
  return acc;
}

cplx raise_lower_expectation(const Matrix& rho, int site, int other) {
  const Eigen::Index bj = Eigen::Index{1} << site;
  const Eigen::Index bo = Eigen::Index{1} << other;
  cplx acc{0.0, 0.0};
  if (site == other) {
    for (Eigen::Index a = 0; a < rho.rows(); ++a) {
      if (a & bj) acc += rho(a, a);
    }
    return acc;
  }
  // Tr(s+_j s-_o rho) = sum over c with o set, j clear of rho(c, c ^ j ^ o).
  for (Eigen::Index c = 0; c < rho.rows(); ++c) {
    if ((c & bo) && !(c & bj)) acc += rho(c, c ^ bj ^ bo);
  }
  return acc;
}

double expectation(const Matrix& rho, const Observable& obs) {
  const int n = static_cast<int>(std::lround(std::log2(rho.rows())));
  auto check_site = [&](int s) {
    if (s < 0 || s >= n) {
      throw ConfigError("observable site out of range: " + obs.label());
    }
  };
  check_site(obs.site);
  switch (obs.kind) {
    case Observable::Kind::sx:
      return 2.0 * lowering_expectation(rho, obs.site).real();
    case Observable::Kind::sy:
      return -2.0 * lowering_expectation(rho, obs.site).imag();
    case Observable::Kind::sz: {
      const Eigen::Index bit = Eigen::Index{1} << obs.site;
      double acc = 0.0;
      for (Eigen::Index a = 0; a < rho.rows(); ++a) {
        acc += (a & bit ? 1.0 : -1.0) * rho(a, a).real();
      }
      return acc;
    }
    case Observable::Kind::population:
      return raise_lower_expectation(rho, obs.site, obs.site).real();
    case Observable::Kind::sxsx: {
      check_site(obs.other);
      if (obs.other == obs.site) return rho.trace().real();
      const Eigen::Index mask =
          (Eigen::Index{1} << obs.site) | (Eigen::Index{1} << obs.other);
      cplx acc{0.0, 0.0};
      for (Eigen::Index a = 0; a < rho.rows(); ++a) acc += rho(a ^ mask, a);
      return acc.real();
    }
    case Observable::Kind::spsm_re:
      check_site(obs.other);
      return raise_lower_expectation(rho, obs.site, obs.other).real();
    case Observable::Kind::spsm_im:
      check_site(obs.other);
      return raise_lower_expectation(rho, obs.site, obs.other).imag();
  }
  return 0.0;
}

std::vector<Observable> all_coherences(int n_spins) {
  std::vector<Observable> obs;
  for (int j = 0; j < n_spins; ++j) obs.push_back(Observable::sigma_x(j));
  return obs;
}

double default_sample_step(const ChainParams& params) {
  const double omega_max =
      std::max(std::abs(params.omega1()),
               std::abs(params.omega2()) + 2.0 * std::abs(params.lambda()));
  if (omega_max <= 0.0) return 0.1;
  return 2.0 * std::numbers::pi / omega_max / 50.0;
}

// --- evolution ------------------------------------------------------------

void propagate(const ChainParams& params, Matrix x, const TimeGrid& grid,
               const IntegratorOptions& integrator,
               const std::function<void(double, const Matrix&)>& visit) {
  const LindbladGenerator generator(params);
  if (x.rows() != generator.dim() || x.cols() != generator.dim()) {
    throw DimensionError("propagated operator does not match the chain");
  }
  if (grid.count > 0 && grid.start < 0.0) {
    throw ConfigError("sampling must start at t >= 0");
  }
  DormandPrince<Matrix> stepper(
      [&generator](double, const Matrix& y, Matrix& dy) { generator.apply(y, dy); },
      integrator);
  double t = 0.0;
  for (std::size_t i = 0; i < grid.count; ++i) {
    const double target = grid.at(i);
    stepper.advance(x, t, target);
    visit(target, x);
  }
}

Trajectory evolve(const ChainParams& params, const InitialState& init,
                  const EvolveOptions& options,
                  const std::vector<Observable>& observables) {
  if (!(options.t_end > 0.0)) throw ConfigError("t_end must be positive");
  const double dt = options.dt_sample > 0.0 ? options.dt_sample
                                            : default_sample_step(params);
  if (options.dt_sample < 0.0) throw ConfigError("dt_sample must be positive");
  if (options.sample_start < 0.0 || options.sample_start > options.t_end) {
    throw ConfigError("sample_start must lie in [0, t_end]");
  }
  for (const auto& obs : observables) {
    const bool bad_site = obs.site < 0 || obs.site >= params.n_spins();
    const bool pair = obs.kind == Observable::Kind::sxsx ||
                      obs.kind == Observable::Kind::spsm_re ||
                      obs.kind == Observable::Kind::spsm_im;
    const bool bad_other =
        pair && (obs.other < 0 || obs.other >= params.n_spins());
    if (bad_site || bad_other) {
      throw ConfigError("observable " + obs.label() + " is outside the chain");
    }
  }

  // Floor avoids a stray extra sample from rounding t_end / dt upward.
  const auto steps = static_cast<std::size_t>(
      std::floor((options.t_end - options.sample_start) / dt + 1e-9));
  const TimeGrid grid{options.sample_start, dt, steps + 1};

  std::vector<std::vector<double>> values(observables.size(),
                                           std::vector<double>(grid.count));
  std::size_t index = 0;
  propagate(params, init.density_matrix(params.n_spins()).matrix(), grid,
            options.integrator, [&](double, const Matrix& rho) {
              for (std::size_t o = 0; o < observables.size(); ++o) {
                values[o][index] = expectation(rho, observables[o]);
              }
              ++index;
            });

  Trajectory traj(grid);
  for (std::size_t o = 0; o < observables.size(); ++o) {
    traj.add(observables[o].label(), std::move(values[o]));
  }
  traj.meta = {{"params", params.describe()},
               {"initial_state", init.descriptor()},
               {"path", "master_equation"}};
  return traj;
}

Trajectory equal_time_correlator(const ChainParams& params,
                                 const InitialState& init,
                                 const EvolveOptions& options, int site,
                                 int other) {
  return evolve(params, init, options, {Observable::sigma_x_pair(site, other)});
}

}  // namespace dimersync
