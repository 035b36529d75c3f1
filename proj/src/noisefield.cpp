#include "sndeco/noisefield.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

#include "sndeco/errors.hpp"
#include "sndeco/rng.hpp"
#include "sndeco/special.hpp"

namespace sndeco {
namespace {

constexpr std::uint32_t kFieldTag = 0xF1E1D;
constexpr double kEnclosedTolerance = 1e-6;

// FFTW's planner is not thread-safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Signed frequency index of FFT bin i.
int frequency(int i, int n) { return i <= n / 2 ? i : i - n; }

}  // namespace

struct NoiseFieldSampler::Plan {
  fftw_plan c2r = nullptr;
};

FieldGrid make_field_grid(int n, double box_length, double dt, int n_steps,
                          std::uint64_t seed, double coupling) {
  if (n < 32 || !is_power_of_two(n)) {
    throw DomainError("n", "must be a power of two >= 32");
  }
  if (!std::isfinite(box_length) || !(box_length > 0.0)) {
    throw DomainError("box_length", "must be positive");
  }
  if (!std::isfinite(dt) || !(dt > 0.0)) {
    throw DomainError("dt", "must be positive");
  }
  if (n_steps < 1) throw DomainError("n_steps", "must be at least 1");
  if (!std::isfinite(coupling) || !(coupling > 0.0)) {
    throw DomainError("coupling", "must be positive");
  }
  return {n, box_length, dt, n_steps, seed, coupling};
}

FieldGrid auto_field_grid(const DimensionlessParams& d, int n, int n_steps,
                          std::uint64_t seed) {
  make_dimensionless(d.mu, d.rho, d.tau_max);
  const double extent =
      std::fmax(std::fmax(d.rho, std::sqrt(spreading_factor(d.tau_max))), 2.0);
  if (n_steps < 1) throw DomainError("n_steps", "must be at least 1");
  return make_field_grid(n, 8.0 * extent, d.tau_max / n_steps, n_steps, seed);
}

double zero_mode_covariance(const FieldGrid& grid) {
  return kCubicEwaldConstant * grid.coupling / grid.box_length;
}

NoiseFieldSampler::NoiseFieldSampler(const FieldGrid& grid)
    : grid_(make_field_grid(grid.n, grid.box_length, grid.dt, grid.n_steps,
                            grid.seed, grid.coupling)),
      half_(grid.n / 2 + 1),
      plan_(std::make_unique<Plan>()) {
  const int n = grid_.n;
  const double volume = std::pow(grid_.box_length, 3);
  const double dk = 2.0 * kPi / grid_.box_length;
  mode_std_.assign(static_cast<std::size_t>(n) * n * half_, 0.0);
  for (int i = 0; i < n; ++i) {
    const double kx = dk * frequency(i, n);
    for (int j = 0; j < n; ++j) {
      const double ky = dk * frequency(j, n);
      for (int l = 0; l < half_; ++l) {
        const double kz = dk * l;
        const double k2 = kx * kx + ky * ky + kz * kz;
        if (k2 == 0.0) continue;  // zero mode stays nulled
        // E|F_k|^2 = P(k) / (V dt), P(k) = 4 pi coupling / k^2
        const double power = 4.0 * kPi * grid_.coupling / k2;
        mode_std_[(static_cast<std::size_t>(i) * n + j) * half_ + l] =
            std::sqrt(power / (volume * grid_.dt));
      }
    }
  }
  auto ws = make_workspace();
  std::lock_guard lock(planner_mutex());
  plan_->c2r = fftw_plan_dft_c2r_3d(
      n, n, n, reinterpret_cast<fftw_complex*>(ws.spectrum.data()),
      ws.field.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (plan_->c2r == nullptr) throw std::runtime_error("FFTW planning failed");
}

NoiseFieldSampler::~NoiseFieldSampler() {
  if (plan_ && plan_->c2r) {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_->c2r);
  }
}

NoiseFieldSampler::Workspace NoiseFieldSampler::make_workspace() const {
  const auto n = static_cast<std::size_t>(grid_.n);
  return {std::vector<std::complex<double>>(n * n * half_),
          std::vector<double>(n * n * n)};
}

void NoiseFieldSampler::sample_into(std::uint64_t member, std::uint64_t step,
                                    Workspace& ws) const {
  const int n = grid_.n;
  const auto key_seed = grid_.seed;
  auto mode = [&](std::size_t idx) {
    const auto [g1, g2] = normal_pair(
        key_seed, {static_cast<std::uint32_t>(idx),
                   static_cast<std::uint32_t>(member),
                   static_cast<std::uint32_t>(step), kFieldTag});
    return std::pair<double, double>{g1, g2};
  };
  auto at = [&](int i, int j, int l) {
    return (static_cast<std::size_t>(i) * n + j) * half_ + l;
  };
  auto* spec = ws.spectrum.data();

  // Interior kz planes: independent complex modes.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int l = 1; l < half_ - 1; ++l) {
        const std::size_t idx = at(i, j, l);
        const auto [g1, g2] = mode(idx);
        const double s = mode_std_[idx] * std::sqrt(0.5);
        spec[idx] = {s * g1, s * g2};
      }
    }
  }
  // kz = 0 and kz = n/2 planes must be Hermitian within the plane:
  // F(i, j) = conj F(-i, -j). Self-conjugate bins are real.
  for (const int l : {0, half_ - 1}) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const int pi = (n - i) % n;
        const int pj = (n - j) % n;
        const std::size_t idx = at(i, j, l);
        if (pi == i && pj == j) {
          const auto [g1, unused] = mode(idx);
          (void)unused;
          spec[idx] = {mode_std_[idx] * g1, 0.0};
        } else if (i < pi || (i == pi && j < pj)) {
          const auto [g1, g2] = mode(idx);
          const double s = mode_std_[idx] * std::sqrt(0.5);
          spec[idx] = {s * g1, s * g2};
          spec[at(pi, pj, l)] = {s * g1, -s * g2};
        }
      }
    }
  }
  fftw_execute_dft_c2r(plan_->c2r, reinterpret_cast<fftw_complex*>(spec),
                       ws.field.data());
}

Field NoiseFieldSampler::sample(std::uint64_t member, std::uint64_t step) const {
  auto ws = make_workspace();
  sample_into(member, step, ws);
  return {grid_.geometry(), std::move(ws.field)};
}

Field sample_field_step(const FieldGrid& grid, std::uint64_t member,
                        std::uint64_t step) {
  return NoiseFieldSampler(grid).sample(member, step);
}

std::vector<CovarianceRow> measured_covariance(
    const FieldGrid& grid, int n_realizations,
    std::span<const double> separations, const Parallelism& par) {
  if (n_realizations < 100) {
    throw DomainError("realizations", "must be at least 100");
  }
  const double dx = grid.spacing();
  std::vector<int> shifts;
  for (const double r : separations) {
    const double cells = r / dx;
    const double rounded = std::round(cells);
    if (!std::isfinite(r) || r < dx * (1 - 1e-9) ||
        r > 0.5 * grid.box_length * (1 + 1e-9)) {
      throw DomainError("separation", "must lie in [dx, L_box/2]");
    }
    if (std::fabs(cells - rounded) > 1e-6) {
      throw DomainError("separation", "must be a whole number of cells");
    }
    shifts.push_back(static_cast<int>(rounded));
  }
  NoiseFieldSampler sampler(grid);
  const int n = grid.n;
  const std::size_t n_sep = shifts.size();
  // per realisation: [sep][axis]
  std::vector<double> products(static_cast<std::size_t>(n_realizations) *
                               n_sep * 3);
  std::vector<NoiseFieldSampler::Workspace> scratch(par.resolved());
  for (auto& ws : scratch) ws = sampler.make_workspace();

  parallel_for(static_cast<std::size_t>(n_realizations), par,
               [&](std::size_t r, unsigned w) {
    auto& ws = scratch[w];
    sampler.sample_into(r, 0, ws);
    const double* f = ws.field.data();
    const double norm = grid.dt / static_cast<double>(grid.geometry().size());
    for (std::size_t s = 0; s < n_sep; ++s) {
      const int sh = shifts[s];
      double acc[3] = {0.0, 0.0, 0.0};
      for (int i = 0; i < n; ++i) {
        const int is = (i + sh) % n;
        for (int j = 0; j < n; ++j) {
          const int js = (j + sh) % n;
          const double* row = f + (static_cast<std::size_t>(i) * n + j) * n;
          const double* row_x = f + (static_cast<std::size_t>(is) * n + j) * n;
          const double* row_y = f + (static_cast<std::size_t>(i) * n + js) * n;
          for (int k = 0; k < n; ++k) {
            const double v = row[k];
            acc[0] += v * row_x[k];
            acc[1] += v * row_y[k];
            acc[2] += v * row[(k + sh) % n];
          }
        }
      }
      for (int a = 0; a < 3; ++a) {
        products[(r * n_sep + s) * 3 + a] = acc[a] * norm;
      }
    }
  });

  const double restore = zero_mode_covariance(grid);
  const double count = n_realizations;
  std::vector<CovarianceRow> rows;
  for (std::size_t s = 0; s < n_sep; ++s) {
    CovarianceRow row{};
    row.separation = shifts[s] * dx;
    row.target = grid.coupling / row.separation;
    std::vector<double> combined(n_realizations);
    for (int a = 0; a < 3; ++a) {
      double sum = 0.0;
      for (int r = 0; r < n_realizations; ++r) {
        sum += products[(r * n_sep + s) * 3 + a];
      }
      const double mean = sum / count;
      double ss = 0.0;
      for (int r = 0; r < n_realizations; ++r) {
        const double d = products[(r * n_sep + s) * 3 + a] - mean;
        ss += d * d;
      }
      row.axis_estimate[a] = mean + restore;
      row.axis_standard_error[a] = std::sqrt(ss / (count - 1) / count);
    }
    for (int r = 0; r < n_realizations; ++r) {
      const std::size_t base = (r * n_sep + s) * 3;
      combined[r] = (products[base] + products[base + 1] + products[base + 2]) / 3;
    }
    double sum = 0.0;
    for (const double v : combined) sum += v;
    const double mean = sum / count;
    double ss = 0.0;
    for (const double v : combined) ss += (v - mean) * (v - mean);
    row.raw_estimate = mean;
    row.estimate = mean + restore;
    row.standard_error = std::sqrt(ss / (count - 1) / count);
    rows.push_back(row);
  }
  return rows;
}

PacketDensity packet_density(const CubicGrid& grid,
                             const GaussianPacket& packet, double t,
                             const PhysicalConstants& c) {
  PacketDensity out{density_on_grid(packet, t, grid, c), 0.0};
  double sum = 0.0;
  for (const double v : out.values) sum += v;
  out.enclosed = sum * grid.cell_volume();
  if (!(std::fabs(1.0 - out.enclosed) <= kEnclosedTolerance)) {
    throw ConfigurationError(
        "packet support clipped by the grid: enclosed probability " +
        std::to_string(out.enclosed));
  }
  return out;
}

double smeared_potential(std::span<const double> field,
                         const PacketDensity& density, const CubicGrid& grid,
                         double mass) {
  if (field.size() != density.values.size()) {
    throw std::invalid_argument("field and density sizes differ");
  }
  const Eigen::Map<const Eigen::VectorXd> f(field.data(),
                                            static_cast<Eigen::Index>(field.size()));
  const Eigen::Map<const Eigen::VectorXd> rho(
      density.values.data(), static_cast<Eigen::Index>(density.values.size()));
  return mass * f.dot(rho) * grid.cell_volume();
}

double smeared_potential(const Field& field, const GaussianPacket& packet,
                         double t, const PhysicalConstants& c) {
  const auto dens = packet_density(field.geometry, packet, t, c);
  return smeared_potential(field.values, dens, field.geometry, packet.mass);
}

EnsembleStats ensemble_stats(std::span<const double> samples) {
  const auto n = samples.size();
  if (n < 4) throw DomainError("members", "need at least 4 samples");
  double sum = 0.0;
  for (const double v : samples) sum += v;
  const double mean = sum / static_cast<double>(n);
  double m2 = 0.0;
  double m4 = 0.0;
  for (const double v : samples) {
    const double d2 = (v - mean) * (v - mean);
    m2 += d2;
    m4 += d2 * d2;
  }
  const double nd = static_cast<double>(n);
  const double variance = m2 / (nd - 1.0);
  const double mu4 = m4 / nd;
  const double sigma2 = m2 / nd;
  // Var(s^2) = (mu4 - sigma^4 (n - 3) / (n - 1)) / n
  const double var_of_var =
      std::fmax(0.0, (mu4 - sigma2 * sigma2 * (nd - 3.0) / (nd - 1.0)) / nd);
  return {n, mean, variance, std::sqrt(var_of_var)};
}

std::vector<double> simulate_phase_differences(const DimensionlessParams& d,
                                               const FieldGrid& grid,
                                               int n_members,
                                               const SimulationOptions& opts) {
  make_dimensionless(d.mu, d.rho, d.tau_max);
  if (n_members < kMinMembers) {
    throw DomainError("members", "must be at least 64");
  }
  const double horizon = grid.dt * grid.n_steps;
  if (std::fabs(horizon - d.tau_max) > 1e-9 * d.tau_max) {
    throw ConfigurationError("n_steps * dt must equal tau_max");
  }
  const double needed =
      8.0 * std::fmax(d.rho, std::sqrt(spreading_factor(d.tau_max)));
  if (grid.box_length < needed * (1.0 - 1e-12)) {
    throw ConfigurationError("box length must be at least 8 max(R, sqrt(C1(T)))");
  }

  const auto nat = PhysicalConstants::natural();
  const auto geometry = grid.geometry();
  const auto p1 = make_packet({-0.5 * d.rho, 0.0, 0.0}, 1.0, 1.0);
  const auto p2 = make_packet({0.5 * d.rho, 0.0, 0.0}, 1.0, 1.0);
  const double amplitude = std::sqrt(d.mu);

  NoiseFieldSampler sampler(grid);
  std::vector<NoiseFieldSampler::Workspace> scratch(
      opts.parallelism.resolved());
  for (auto& ws : scratch) ws = sampler.make_workspace();

  std::vector<double> phase(n_members, 0.0);
  for (int step = 0; step < grid.n_steps; ++step) {
    const double t = (step + 0.5) * grid.dt;
    const auto rho1 = packet_density(geometry, p1, t, nat);
    const auto rho2 = packet_density(geometry, p2, t, nat);
    if (opts.check_self_gravity &&
        self_potential_at_center(p1, t, nat) !=
            self_potential_at_center(p2, t, nat)) {
      throw std::logic_error("self-gravity phases differ between centres");
    }
    parallel_for(static_cast<std::size_t>(n_members), opts.parallelism,
                 [&](std::size_t member, unsigned w) {
      auto& ws = scratch[w];
      sampler.sample_into(member, static_cast<std::uint64_t>(step), ws);
      const double v1 = smeared_potential(ws.field, rho1, geometry, p1.mass);
      const double v2 = smeared_potential(ws.field, rho2, geometry, p2.mass);
      phase[member] -= amplitude * (v1 - v2) * grid.dt;
    });
  }
  return phase;
}

EnsembleStats simulate_phase_variance(const DimensionlessParams& d,
                                      const FieldGrid& grid, int n_members,
                                      const SimulationOptions& opts) {
  const auto phase = simulate_phase_differences(d, grid, n_members, opts);
  return ensemble_stats(phase);
}

}  // namespace sndeco
