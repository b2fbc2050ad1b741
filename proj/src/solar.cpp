#include "nmcs/solar.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

namespace nmcs::solar {

SpectrumTable::SpectrumTable(std::vector<double> energy, std::vector<double> photon_flux,
                             double p_in)
    : energy_(std::move(energy)), flux_(std::move(photon_flux)), p_in_(p_in) {
  if (energy_.size() < 2 || energy_.size() != flux_.size()) {
    throw DomainError("spectrum needs at least two aligned energy/flux samples");
  }
  for (std::size_t i = 0; i < energy_.size(); ++i) {
    if (!(energy_[i] > 0.0)) {
      throw DomainError("photon energies must be positive");
    }
    if (i > 0 && !(energy_[i] > energy_[i - 1])) {
      throw DomainError("energy grid must be strictly increasing");
    }
    if (!(flux_[i] >= 0.0)) {
      throw DomainError("photon flux must be non-negative");
    }
  }
  if (!(p_in_ > 0.0)) {
    throw DomainError("incident power must be positive");
  }
  cumulative_.resize(energy_.size());
  cumulative_[0] = 0.0;
  for (std::size_t i = 1; i < energy_.size(); ++i) {
    cumulative_[i] =
        cumulative_[i - 1] + 0.5 * (flux_[i] + flux_[i - 1]) * (energy_[i] - energy_[i - 1]);
  }
}

double SpectrumTable::photons_below(double e) const {
  if (e <= energy_.front()) {
    return 0.0;
  }
  if (e >= energy_.back()) {
    return cumulative_.back();
  }
  const auto it = std::upper_bound(energy_.begin(), energy_.end(), e);
  const auto k = static_cast<std::size_t>(it - energy_.begin()) - 1;
  const double width = energy_[k + 1] - energy_[k];
  const double t = e - energy_[k];
  const double slope = (flux_[k + 1] - flux_[k]) / width;
  return cumulative_[k] + flux_[k] * t + 0.5 * slope * t * t;
}

double SpectrumTable::photon_quantile(double fraction) const {
  const double target = std::clamp(fraction, 0.0, 1.0) * total_photons();
  double lo = energy_.front();
  double hi = energy_.back();
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (photons_below(mid) >= target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// Parses every comma-separated field as a number; false if any field is not
// a complete number.
bool parse_fields(const std::string& line, std::vector<double>& out) {
  out.clear();
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) {
    field = trim(field);
    if (field.empty()) {
      return false;
    }
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end != field.c_str() + field.size()) {
      return false;
    }
    out.push_back(v);
  }
  return !out.empty();
}

}  // namespace

SpectrumTable parse_spectrum(std::istream& in) {
  std::vector<std::pair<double, double>> rows;
  std::string line;
  std::vector<double> fields;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') {
      continue;
    }
    if (!parse_fields(line, fields)) {
      if (rows.empty()) {
        continue;  // header
      }
      throw ParseError("malformed spectrum row at line " + std::to_string(line_no));
    }
    double irradiance = 0.0;
    if (fields.size() == 2) {
      irradiance = fields[1];
    } else if (fields.size() == 4) {
      irradiance = fields[2];
    } else {
      throw ParseError("expected 2 or 4 columns at line " + std::to_string(line_no));
    }
    const double wavelength = fields[0];
    if (!(wavelength > 0.0)) {
      throw DomainError("non-positive wavelength at line " + std::to_string(line_no));
    }
    if (!(irradiance >= 0.0)) {
      throw DomainError("negative irradiance at line " + std::to_string(line_no));
    }
    rows.emplace_back(wavelength, irradiance);
  }
  if (rows.size() < 2) {
    throw ParseError("spectrum file holds fewer than two data rows");
  }
  std::sort(rows.begin(), rows.end());
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].first == rows[i - 1].first) {
      throw ParseError("duplicate wavelength " + std::to_string(rows[i].first));
    }
  }

  double p_in = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    p_in += 0.5 * (rows[i].second + rows[i - 1].second) * (rows[i].first - rows[i - 1].first);
  }

  // Ascending wavelength is descending energy.
  std::vector<double> energy;
  std::vector<double> flux;
  energy.reserve(rows.size());
  flux.reserve(rows.size());
  for (auto it = rows.rbegin(); it != rows.rend(); ++it) {
    const double lambda = it->first;
    const double e = kHcEvNm / lambda;
    // photons per nm, times |d lambda / dE| = lambda / E nm per eV
    const double per_nm = it->second / (e * kElementaryCharge);
    energy.push_back(e);
    flux.push_back(per_nm * lambda / e);
  }
  return SpectrumTable(std::move(energy), std::move(flux), p_in);
}

SpectrumTable load_spectrum(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open spectrum file " + path.string());
  }
  return parse_spectrum(in);
}

double flux_integral(const SpectrumTable& table, double e_lo, double e_hi) {
  if (!(e_lo > 0.0)) {
    throw DomainError("lower integration energy must be positive");
  }
  if (e_hi < e_lo) {
    throw DomainError("upper integration energy below lower one");
  }
  if (e_hi == e_lo) {
    return 0.0;
  }
  return kElementaryCharge * (table.photons_below(e_hi) - table.photons_below(e_lo));
}

double RadiativeModel::default_prefactor() {
  const double h_ev = kPlanck / kElementaryCharge;
  return 2.0 * std::numbers::pi * kElementaryCharge /
         (h_ev * h_ev * h_ev * kSpeedOfLight * kSpeedOfLight);
}

void RadiativeModel::validate() const {
  if (!(temperature > 0.0)) {
    throw DomainError("temperature must be positive");
  }
  if (!(prefactor > 0.0)) {
    throw DomainError("radiative prefactor must be positive");
  }
  if (!(ideality > 0.0 && ideality <= 1.0)) {
    throw DomainError("ideality must lie in (0, 1]");
  }
}

namespace {

void check_voltage(const RadiativeModel& model, double e_lo, double voltage) {
  if (!(e_lo > 0.0)) {
    throw DomainError("band gap must be positive");
  }
  if (voltage < 0.0 || !(model.ideality * voltage < e_lo)) {
    throw DomainError("voltage must satisfy 0 <= ideality * V < E_gap");
  }
}

struct Integrand {
  double mu;
  double kT;
  double operator()(double e) const { return e * e / std::expm1((e - mu) / kT); }
};

double simpson(double a, double fa, double fm, double fb, double b) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson(const Integrand& g, double a, double b, double fa, double fm, double fb,
                        double whole, double rel_tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = g(lm);
  const double frm = g(rm);
  const double left = simpson(a, fa, flm, fm, m);
  const double right = simpson(m, fm, frm, fb, b);
  const double both = left + right;
  if (depth <= 0 || std::abs(both - whole) <= 15.0 * rel_tol * std::abs(both)) {
    return both + (both - whole) / 15.0;
  }
  return adaptive_simpson(g, a, m, fa, flm, fm, left, rel_tol, depth - 1) +
         adaptive_simpson(g, m, b, fm, frm, fb, right, rel_tol, depth - 1);
}

}  // namespace

double radiative_current_quadrature(const RadiativeModel& model, double e_lo, double voltage) {
  check_voltage(model, e_lo, voltage);
  if (e_lo >= model.e_max) {
    return 0.0;
  }
  const double kT = model.kT();
  const Integrand g{model.ideality * voltage, kT};
  // Panels a few kT wide follow the exponential decay of the integrand.
  const double width = 2.0 * kT;
  double total = 0.0;
  for (double a = e_lo; a < model.e_max; a += width) {
    const double b = std::min(a + width, model.e_max);
    const double fa = g(a);
    // Past its peak (E > 2 kT) the integrand decreases, so fa * (e_max - a)
    // bounds everything that is left.
    if (a > 3.0 * kT && fa * (model.e_max - a) < 1e-16 * total) {
      break;
    }
    const double fb = g(b);
    const double fm = g(0.5 * (a + b));
    total += adaptive_simpson(g, a, b, fa, fm, fb, simpson(a, fa, fm, fb, b), 1e-11, 40);
  }
  return model.prefactor * total;
}

double radiative_current(const RadiativeModel& model, double e_lo, double voltage) {
  check_voltage(model, e_lo, voltage);
  if (e_lo >= model.e_max) {
    return 0.0;
  }
  const double kT = model.kT();
  const double mu = model.ideality * voltage;
  const double gap_over_kT = (e_lo - mu) / kT;
  // 1 / (e^y - 1) = sum_k e^(-k y); the k-th term shrinks like e^(-k y).
  if (gap_over_kT < 2.0) {
    return radiative_current_quadrature(model, e_lo, voltage);
  }
  // Integral of E^2 e^(-b (E - mu)) from x to infinity with b = k / kT.
  auto tail = [mu](double x, double b) {
    return std::exp(-b * (x - mu)) * (x * x / b + 2.0 * x / (b * b) + 2.0 / (b * b * b));
  };
  double sum = 0.0;
  for (int k = 1; k <= 64; ++k) {
    const double b = k / kT;
    const double term = tail(e_lo, b) - tail(model.e_max, b);
    sum += term;
    if (term <= 1e-15 * sum) {
      break;
    }
  }
  return model.prefactor * sum;
}

const char* to_string(Topology topology) {
  return topology == Topology::SplitSpectrum ? "ss" : "mj";
}

Topology parse_topology(const std::string& text) {
  std::string name = text;
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (name == "ss" || name == "split" || name == "split-spectrum") {
    return Topology::SplitSpectrum;
  }
  if (name == "mj" || name == "multi-junction") {
    return Topology::MultiJunction;
  }
  throw std::invalid_argument("unknown topology: " + text);
}

double open_circuit_voltage(const RadiativeModel& model, double e_lo, double j_gen) {
  const double v_max = e_lo / model.ideality;
  if (j_gen <= radiative_current(model, e_lo, 0.0)) {
    return 0.0;
  }
  double lo = 0.0;
  double hi = v_max;
  // J_r grows without bound as V approaches e_lo / ideality, so the root
  // lies strictly inside [0, v_max).
  while (hi - lo > 1e-12 * v_max) {
    const double mid = 0.5 * (lo + hi);
    if (radiative_current(model, e_lo, mid) < j_gen) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

namespace {

constexpr double kInvPhi = 0.6180339887498949;  // (sqrt(5) - 1) / 2

// Golden-section search for the maximum of a unimodal function on [a, b].
template <class F>
double golden_max(F&& fn, double a, double b, double tol) {
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = fn(c);
  double fd = fn(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = fn(d);
    }
  }
  return 0.5 * (a + b);
}

const SpectrumTable& spectrum_of(const StackSpec& stack) {
  if (!stack.spectrum) {
    throw std::invalid_argument("stack has no spectrum");
  }
  return *stack.spectrum;
}

std::vector<double> checked_sorted_gaps(const StackSpec& stack, std::span<const double> gaps) {
  if (gaps.empty()) {
    throw DomainError("at least one band gap is required");
  }
  std::vector<double> g(gaps.begin(), gaps.end());
  for (double v : g) {
    if (!(v > stack.gap_lower && v < stack.gap_upper)) {
      throw DomainError("band gap " + std::to_string(v) + " outside (" +
                        std::to_string(stack.gap_lower) + ", " + std::to_string(stack.gap_upper) +
                        ")");
    }
  }
  std::sort(g.begin(), g.end());
  return g;
}

double band_top(const std::vector<double>& gaps, std::size_t i) {
  return i + 1 < gaps.size() ? gaps[i + 1] : std::numeric_limits<double>::infinity();
}

}  // namespace

CellOperatingPoint optimal_cell_power(const StackSpec& stack, double e_lo, double e_hi) {
  if (!(e_lo < e_hi)) {
    throw DomainError("cell band must satisfy e_lo < e_hi");
  }
  const RadiativeModel& model = stack.model;
  CellOperatingPoint op;
  op.e_lo = e_lo;
  op.e_hi = e_hi;
  op.j_gen = flux_integral(spectrum_of(stack), e_lo, e_hi);
  op.j_rad = radiative_current(model, e_lo, 0.0);
  op.j_net = op.j_gen - op.j_rad;
  if (op.j_gen <= 0.0 || op.j_net <= 0.0) {
    op.j_net = std::max(op.j_net, 0.0);
    return op;
  }
  const double v_oc = open_circuit_voltage(model, e_lo, op.j_gen);
  auto power = [&](double v) { return v * (op.j_gen - radiative_current(model, e_lo, v)); };
  const double v = golden_max(power, 0.0, v_oc, 1e-7);
  op.voltage = v;
  op.j_rad = radiative_current(model, e_lo, v);
  op.j_net = op.j_gen - op.j_rad;
  op.efficiency_share = op.power() / spectrum_of(stack).p_in();
  return op;
}

double voltage_at_current(const RadiativeModel& model, double e_lo, double j_gen,
                          double current, double v_oc) {
  const double target = j_gen - current;  // required J_r
  if (target <= radiative_current(model, e_lo, 0.0)) {
    return 0.0;
  }
  double lo = 0.0;
  double hi = v_oc;
  while (hi - lo > 1e-9 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (radiative_current(model, e_lo, mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  // lo never overshoots, so the stack power is never overestimated.
  return lo;
}

double ss_efficiency(const StackSpec& stack, std::span<const double> gaps) {
  const auto g = checked_sorted_gaps(stack, gaps);
  double power = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double top = band_top(g, i);
    if (top > g[i]) {
      power += optimal_cell_power(stack, g[i], top).power();
    }
  }
  return power / spectrum_of(stack).p_in();
}

double mj_efficiency(const StackSpec& stack, std::span<const double> gaps) {
  const auto g = checked_sorted_gaps(stack, gaps);
  const SpectrumTable& table = spectrum_of(stack);
  const RadiativeModel& model = stack.model;
  const std::size_t n = g.size();
  std::vector<double> j_gen(n);
  std::vector<double> v_oc(n);
  for (std::size_t i = 0; i < n; ++i) {
    j_gen[i] = flux_integral(table, g[i], band_top(g, i));
  }
  const double j_min = *std::min_element(j_gen.begin(), j_gen.end());
  if (!(j_min > 0.0)) {
    return 0.0;
  }
  for (std::size_t i = 0; i < n; ++i) {
    v_oc[i] = open_circuit_voltage(model, g[i], j_gen[i]);
  }
  auto power = [&](double current) {
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      v += voltage_at_current(model, g[i], j_gen[i], current, v_oc[i]);
    }
    return current * v;
  };
  const double best_current = golden_max(power, 0.0, j_min, 1e-9 * j_min);
  return power(best_current) / table.p_in();
}

double efficiency(const StackSpec& stack, std::span<const double> gaps) {
  return stack.topology == Topology::SplitSpectrum ? ss_efficiency(stack, gaps)
                                                   : mj_efficiency(stack, gaps);
}

std::array<Point, 2> informed_starts(const StackSpec& stack, std::size_t n_cells) {
  if (n_cells == 0) {
    throw std::invalid_argument("informed starts need at least one cell");
  }
  const SpectrumTable& table = spectrum_of(stack);
  const double lo = stack.gap_lower + kGapMargin;
  const double hi = stack.gap_upper - kGapMargin;
  Point equal_current(n_cells);
  Point equal_spacing(n_cells);
  const auto n = static_cast<double>(n_cells);
  for (std::size_t i = 0; i < n_cells; ++i) {
    const auto k = static_cast<double>(i + 1);
    equal_current[i] = std::clamp(table.photon_quantile(k / (n + 1.0)), lo, hi);
    equal_spacing[i] = 0.5 + 3.0 * (k - 0.5) / n;
  }
  return {equal_current, equal_spacing};
}

ObjectiveSpec objective_for(const StackSpec& stack) {
  spectrum_of(stack);
  stack.model.validate();
  ObjectiveSpec spec;
  spec.name = std::string(to_string(stack.topology)) + "-" + std::to_string(stack.n_cells);
  spec.dimension = stack.n_cells;
  spec.lower.assign(stack.n_cells, stack.gap_lower + kGapMargin);
  spec.upper.assign(stack.n_cells, stack.gap_upper - kGapMargin);
  spec.evaluator = [stack](std::span<const double> gaps) {
    return 1.0 - efficiency(stack, gaps);
  };
  return spec;
}

}  // namespace nmcs::solar
