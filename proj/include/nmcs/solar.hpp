#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nmcs/objective.hpp"

namespace nmcs::solar {

// Detailed-balance efficiency of split-spectrum and series-connected
// multi-junction cell stacks. Energies are in eV, voltages in V, current
// densities in A m^-2 and powers in W m^-2.

inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kPlanck = 6.62607015e-34;             // J s
inline constexpr double kSpeedOfLight = 299792458.0;          // m s^-1
inline constexpr double kBoltzmann = 1.380649e-23;            // J K^-1
inline constexpr double kHcEvNm = 1239.8419;                  // photon energy (eV) * wavelength (nm)

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Photon flux per unit energy on an ascending energy grid, plus the incident
/// power of the source spectrum. Immutable once built.
class SpectrumTable {
 public:
  SpectrumTable(std::vector<double> energy, std::vector<double> photon_flux, double p_in);

  [[nodiscard]] const std::vector<double>& energy() const { return energy_; }
  [[nodiscard]] const std::vector<double>& photon_flux() const { return flux_; }
  [[nodiscard]] double p_in() const { return p_in_; }
  [[nodiscard]] double min_energy() const { return energy_.front(); }
  [[nodiscard]] double max_energy() const { return energy_.back(); }

  /// Photons s^-1 m^-2 with energy below `e` (trapezoid on the grid, linear
  /// interpolation inside the last interval).
  [[nodiscard]] double photons_below(double e) const;
  [[nodiscard]] double total_photons() const { return cumulative_.back(); }

  /// Smallest energy with photons_below(e) >= fraction * total_photons().
  [[nodiscard]] double photon_quantile(double fraction) const;

 private:
  std::vector<double> energy_;
  std::vector<double> flux_;
  std::vector<double> cumulative_;
  double p_in_;
};

/// Reads `wavelength_nm,irradiance_W_m2_nm` rows. Lines starting with '#'
/// and a leading header line are skipped. Four-column rows in the raw ASTM
/// G173 layout use the global-tilt column.
SpectrumTable parse_spectrum(std::istream& in);
SpectrumTable load_spectrum(const std::filesystem::path& path);

/// q * integral of the photon flux over [e_lo, e_hi]; e_hi may be infinite.
double flux_integral(const SpectrumTable& table, double e_lo, double e_hi);

struct RadiativeModel {
  double temperature = 300.0;
  // Constant ideality factor gamma in the emission exponent (E - gamma V).
  double ideality = 1.0;
  // Upper energy of the emission integral.
  double e_max = 10.0;
  // 2 pi q / (h^3 c^2) with h in eV s: A m^-2 eV^-3.
  double prefactor = default_prefactor();

  [[nodiscard]] double kT() const { return kBoltzmann * temperature / kElementaryCharge; }
  void validate() const;
  static double default_prefactor();
};

/// Radiative recombination current at `voltage` of a cell with gap e_lo.
/// Uses the Bose series in closed form when it converges quickly and falls
/// back to radiative_current_quadrature otherwise.
double radiative_current(const RadiativeModel& model, double e_lo, double voltage);

/// The same integral by adaptive Simpson quadrature (relative tolerance 1e-9).
double radiative_current_quadrature(const RadiativeModel& model, double e_lo, double voltage);

enum class Topology { SplitSpectrum, MultiJunction };

const char* to_string(Topology topology);
Topology parse_topology(const std::string& name);

struct StackSpec {
  std::size_t n_cells = 3;
  Topology topology = Topology::SplitSpectrum;
  double gap_lower = 0.0;
  double gap_upper = 4.0;
  RadiativeModel model;
  std::shared_ptr<const SpectrumTable> spectrum;
};

struct CellOperatingPoint {
  double e_lo = 0.0;
  double e_hi = 0.0;
  double voltage = 0.0;
  double j_gen = 0.0;
  double j_rad = 0.0;
  double j_net = 0.0;
  double efficiency_share = 0.0;

  [[nodiscard]] double power() const { return voltage * j_net; }
};

/// Open-circuit voltage: the root of j_gen - J_r(V) on [0, e_lo / ideality).
double open_circuit_voltage(const RadiativeModel& model, double e_lo, double j_gen);

/// Maximum power point of one cell absorbing [e_lo, e_hi), by golden-section
/// search over [0, V_oc].
CellOperatingPoint optimal_cell_power(const StackSpec& stack, double e_lo, double e_hi);

/// Voltage at which a cell with photocurrent j_gen delivers `current`;
/// 0 when the current exceeds the short-circuit current.
double voltage_at_current(const RadiativeModel& model, double e_lo, double j_gen,
                          double current, double v_oc);

double ss_efficiency(const StackSpec& stack, std::span<const double> gaps);
double mj_efficiency(const StackSpec& stack, std::span<const double> gaps);
/// ss_efficiency or mj_efficiency according to the stack's topology.
double efficiency(const StackSpec& stack, std::span<const double> gaps);

/// Start A: gaps at the photon-count quantiles i/(N+1), so every band
/// receives the same photocurrent. Start B: gaps evenly spread over [0.5, 3.5].
std::array<Point, 2> informed_starts(const StackSpec& stack, std::size_t n_cells);

/// Minimization objective 1 - efficiency over gaps in (0.001, 3.999).
ObjectiveSpec objective_for(const StackSpec& stack);

inline constexpr double kGapMargin = 1e-3;

}  // namespace nmcs::solar
