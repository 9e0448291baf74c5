#include <charconv>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "polarform/errors.hpp"
#include "polarform/experiments.hpp"

namespace polarform {
namespace {

using nlohmann::json;

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

std::vector<double> grid(double first, double last, double step) {
  std::vector<double> out;
  const auto count = static_cast<long>(std::llround((last - first) / step));
  for (long i = 0; i <= count; ++i) {
    // Round to 12 decimals so 0.1-step grids print as 0.3, not 0.30000000000000004.
    out.push_back(std::round((first + step * static_cast<double>(i)) * 1e12) / 1e12);
  }
  return out;
}

const std::vector<SchemeId>& all_schemes() {
  static const std::vector<SchemeId> v{SchemeId::kPolarforming, SchemeId::kDpa, SchemeId::kSpra,
                                       SchemeId::kPaa, SchemeId::kCpa, SchemeId::kLpa};
  return v;
}

const std::vector<SchemeId>& single_rf_schemes() {
  static const std::vector<SchemeId> v{SchemeId::kPolarforming, SchemeId::kSpra, SchemeId::kPaa,
                                       SchemeId::kCpa, SchemeId::kLpa};
  return v;
}

SeriesSpec series(SchemeId scheme, std::size_t m, std::size_t n) {
  SeriesSpec s;
  s.scheme = scheme;
  s.m_rx = m;
  s.n_tx = n;
  return s;
}

struct CatalogEntry {
  std::string_view id;
  std::string_view description;
  ExperimentConfig (*make)();
};

ExperimentConfig base(std::string id, SweepAxis axis, std::vector<double> values) {
  ExperimentConfig c;
  c.experiment_id = std::move(id);
  c.sweep_axis = axis;
  c.sweep_values = std::move(values);
  c.fixed.chi = 0.2;
  c.fixed.m_rx = 2;
  c.fixed.n_tx = 2;
  c.snr_db = 5.0;
  c.realizations = 10000;
  c.master_seed = 1;
  return c;
}

ExperimentConfig fig4() {
  ExperimentConfig c = base("fig4_convergence", SweepAxis::kIteration, grid(0, 20, 1));
  c.schemes = {SchemeId::kPolarforming};
  for (auto [m, n] : {std::pair{1, 1}, {1, 2}, {2, 1}, {1, 4}, {2, 2}, {4, 4}}) {
    c.series.push_back(series(SchemeId::kPolarforming, m, n));
  }
  return c;
}

ExperimentConfig fig5() {
  ExperimentConfig c = base("fig5_dpa", SweepAxis::kSnrDb, grid(-10, 30, 1));
  c.schemes = {SchemeId::kPolarforming, SchemeId::kDpa};
  for (std::size_t k : {1, 2, 4}) c.series.push_back(series(SchemeId::kPolarforming, k, k));
  for (std::size_t k : {1, 2, 4}) c.series.push_back(series(SchemeId::kDpa, k, k));
  return c;
}

ExperimentConfig fig6() {
  ExperimentConfig c = base("fig6_single_sided", SweepAxis::kSnrDb, grid(-10, 20, 1));
  c.schemes = single_rf_schemes();
  // (a)/(c): two transmit PRAs, fixed single receive antenna.
  // (b)/(d): two receive PRAs, fixed single transmit antenna.
  for (auto side : {Side::kReceive, Side::kTransmit}) {
    for (auto pol : {FixedPolarization::kLpa, FixedPolarization::kCpa}) {
      for (SchemeId scheme : single_rf_schemes()) {
        SeriesSpec s = side == Side::kReceive ? series(scheme, 1, 2) : series(scheme, 2, 1);
        s.fixed_side = side;
        s.fixed_polarization = pol;
        c.series.push_back(s);
      }
    }
  }
  return c;
}

ExperimentConfig fig7(std::string id, std::size_t m, std::size_t n) {
  ExperimentConfig c = base(std::move(id), SweepAxis::kSnrDb, grid(-10, 20, 1));
  c.schemes = all_schemes();
  c.fixed.m_rx = m;
  c.fixed.n_tx = n;
  return c;
}

ExperimentConfig fig8() {
  ExperimentConfig c = base("fig8_antennas", SweepAxis::kAntennas, grid(1, 8, 1));
  c.schemes = single_rf_schemes();
  return c;
}

ExperimentConfig fig9() {
  ExperimentConfig c = base("fig9_xpd", SweepAxis::kChi, grid(0, 1, 0.1));
  c.schemes = single_rf_schemes();
  return c;
}

ExperimentConfig fig10() {
  ExperimentConfig c = base("fig10_xpi", SweepAxis::kMu, grid(0, 1, 0.1));
  c.schemes = single_rf_schemes();
  return c;
}

ExperimentConfig fig11() {
  ExperimentConfig c = base("fig11_correlation", SweepAxis::kNuMagnitude, grid(0, 1, 0.1));
  c.schemes = single_rf_schemes();
  return c;
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries{
      {"fig4_convergence", "mean rate per iteration of the alternating optimizers, SNR 5 dB", fig4},
      {"fig5_dpa", "polarforming vs dual-polarized antennas (1/2/4 antennas per side) vs SNR", fig5},
      {"fig6_single_sided", "transmit-only (M=1,N=2) and receive-only (M=2,N=1) polarforming with a fixed LPA/CPA end", fig6},
      {"fig7_rate_vs_snr", "rate vs SNR, M=N=2, all schemes", [] { return fig7("fig7_rate_vs_snr", 2, 2); }},
      {"fig7_siso", "rate vs SNR, M=N=1, all schemes", [] { return fig7("fig7_siso", 1, 1); }},
      {"fig7_miso", "rate vs SNR, M=1, N=2, all schemes", [] { return fig7("fig7_miso", 1, 2); }},
      {"fig7_simo", "rate vs SNR, M=2, N=1, all schemes", [] { return fig7("fig7_simo", 2, 1); }},
      {"fig8_antennas", "rate vs M=N at SNR 5 dB", fig8},
      {"fig9_xpd", "rate vs inverse XPD chi, M=N=2, SNR 5 dB", fig9},
      {"fig10_xpi", "rate vs inverse XPI mu (both ends), M=N=2, SNR 5 dB", fig10},
      {"fig11_correlation", "rate vs correlation magnitude |nu| (both ends), M=N=2, SNR 5 dB", fig11},
  };
  return entries;
}

template <typename T>
T parse_number(std::string_view field, std::string_view text) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ConfigError(std::string(field), "cannot parse '" + std::string(text) + "' as a number");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t pos = text.find(sep, start);
    const std::size_t end = pos == std::string_view::npos ? text.size() : pos;
    std::string_view item = text.substr(start, end - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) out.push_back(item);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

SchemeId scheme_or_throw(std::string_view field, std::string_view tag) {
  if (auto id = parse_scheme(tag)) return *id;
  throw ConfigError(std::string(field), "unknown scheme '" + std::string(tag) + "'");
}

}  // namespace

std::string_view to_string(SweepAxis axis) noexcept {
  switch (axis) {
    case SweepAxis::kSnrDb: return "snr_db";
    case SweepAxis::kAntennas: return "n_antennas";
    case SweepAxis::kChi: return "chi";
    case SweepAxis::kMu: return "mu";
    case SweepAxis::kNuMagnitude: return "nu_magnitude";
    case SweepAxis::kIteration: return "iteration";
  }
  return "unknown";
}

std::optional<SweepAxis> parse_axis(std::string_view name) noexcept {
  for (SweepAxis a : {SweepAxis::kSnrDb, SweepAxis::kAntennas, SweepAxis::kChi, SweepAxis::kMu,
                      SweepAxis::kNuMagnitude, SweepAxis::kIteration}) {
    if (name == to_string(a)) return a;
  }
  return std::nullopt;
}

std::string SeriesSpec::label() const {
  std::string out(to_string(scheme));
  if (m_rx && n_tx) out += "@" + std::to_string(*m_rx) + "x" + std::to_string(*n_tx);
  if (fixed_side) {
    out += *fixed_side == Side::kReceive ? "/rx=" : "/tx=";
    out += fixed_polarization == FixedPolarization::kLpa ? "LPA" : "CPA";
  }
  return out;
}

std::optional<FixedEnd> SeriesSpec::fixed_end() const {
  if (!fixed_side) return std::nullopt;
  const bool lpa = fixed_polarization == FixedPolarization::kLpa;
  if (*fixed_side == Side::kReceive) {
    return FixedEnd{Side::kReceive, lpa ? Vec2{1.0, 0.0} : Vec2{1.0, Complex(0.0, 1.0)}};
  }
  return FixedEnd{Side::kTransmit,
                  lpa ? Vec2{1.0, 0.0} : Vec2{kInvSqrt2, Complex(0.0, kInvSqrt2)}};
}

SeriesSpec SeriesSpec::parse(std::string_view label) {
  SeriesSpec s;
  std::string_view rest = label;
  std::string_view fixed;
  if (const auto slash = rest.find('/'); slash != std::string_view::npos) {
    fixed = rest.substr(slash + 1);
    rest = rest.substr(0, slash);
  }
  std::string_view dims;
  if (const auto at = rest.find('@'); at != std::string_view::npos) {
    dims = rest.substr(at + 1);
    rest = rest.substr(0, at);
  }
  s.scheme = scheme_or_throw("series", rest);
  if (!dims.empty()) {
    const auto x = dims.find('x');
    if (x == std::string_view::npos) throw ConfigError("series", "antenna suffix must read @MxN in '" + std::string(label) + "'");
    s.m_rx = parse_number<std::size_t>("series", dims.substr(0, x));
    s.n_tx = parse_number<std::size_t>("series", dims.substr(x + 1));
  }
  if (!fixed.empty()) {
    if (fixed == "rx=LPA" || fixed == "rx=CPA") {
      s.fixed_side = Side::kReceive;
    } else if (fixed == "tx=LPA" || fixed == "tx=CPA") {
      s.fixed_side = Side::kTransmit;
    } else {
      throw ConfigError("series", "fixed end must be rx=LPA, rx=CPA, tx=LPA or tx=CPA in '" + std::string(label) + "'");
    }
    s.fixed_polarization = fixed.ends_with("LPA") ? FixedPolarization::kLpa : FixedPolarization::kCpa;
  }
  return s;
}

std::vector<SeriesSpec> ExperimentConfig::resolved_series() const {
  if (!series.empty()) return series;
  std::vector<SeriesSpec> out;
  for (SchemeId id : schemes) {
    SeriesSpec s;
    s.scheme = id;
    out.push_back(s);
  }
  return out;
}

void ExperimentConfig::validate() const {
  if (experiment_id.empty()) throw ConfigError("experiment_id", "must not be empty");
  if (realizations < 1) throw ConfigError("realizations", "must be at least 1");
  if (sweep_values.empty()) throw ConfigError("sweep_values", "must not be empty");
  if (schemes.empty() && series.empty()) throw ConfigError("schemes", "must not be empty");
  try {
    fixed.validate();
  } catch (const InvalidParameter& e) {
    throw ConfigError("fixed", e.what());
  }
  if (!std::isfinite(snr_db)) throw ConfigError("snr_db", "must be finite");

  for (double v : sweep_values) {
    const std::string field = "sweep_values";
    if (!std::isfinite(v)) throw ConfigError(field, "values must be finite");
    switch (sweep_axis) {
      case SweepAxis::kSnrDb: break;
      case SweepAxis::kAntennas:
      case SweepAxis::kIteration:
        if (v < 0.0 || v != std::floor(v)) throw ConfigError(field, "must be non-negative integers");
        if (sweep_axis == SweepAxis::kAntennas && (v < 1.0 || v > 16.0)) {
          throw ConfigError(field, "antenna counts must lie in [1, 16]");
        }
        if (sweep_axis == SweepAxis::kIteration && v > 20.0) {
          throw ConfigError(field, "iteration indices must lie in [0, 20]");
        }
        break;
      case SweepAxis::kChi:
      case SweepAxis::kMu:
      case SweepAxis::kNuMagnitude:
        if (v < 0.0 || v > 1.0) throw ConfigError(field, "must lie in [0, 1] for axis " + std::string(to_string(sweep_axis)));
        break;
    }
  }

  for (const SeriesSpec& s : resolved_series()) {
    const std::string label = s.label();
    if ((s.m_rx && (*s.m_rx < 1 || *s.m_rx > 16)) || (s.n_tx && (*s.n_tx < 1 || *s.n_tx > 16))) {
      throw ConfigError("series", label + ": antenna counts must lie in [1, 16]");
    }
    if (!s.fixed_side) continue;
    if (s.scheme == SchemeId::kDpa) throw ConfigError("series", label + ": DPA has no single-sided variant");
    if (s.scheme == SchemeId::kPolarforming) {
      const std::size_t m = s.m_rx.value_or(fixed.m_rx);
      const std::size_t n = s.n_tx.value_or(fixed.n_tx);
      const bool ok = *s.fixed_side == Side::kReceive ? m == 1 : n == 1;
      if (!ok || (sweep_axis == SweepAxis::kAntennas && !(s.m_rx && s.n_tx))) {
        throw ConfigError("series", label + ": single-sided polarforming needs a single fixed antenna");
      }
    }
  }
}

std::vector<std::string> experiment_ids() {
  std::vector<std::string> out;
  for (const auto& e : catalog()) out.emplace_back(e.id);
  return out;
}

ExperimentConfig catalog_experiment(std::string_view id) {
  for (const auto& e : catalog()) {
    if (e.id == id) return e.make();
  }
  throw ConfigError("experiment_id", "unknown experiment '" + std::string(id) + "'");
}

std::string describe_experiment(std::string_view id) {
  for (const auto& e : catalog()) {
    if (e.id == id) return std::string(e.description);
  }
  throw ConfigError("experiment_id", "unknown experiment '" + std::string(id) + "'");
}

void apply_override(ExperimentConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError(std::string(assignment), "override must read key=value");
  }
  const std::string key(assignment.substr(0, eq));
  const std::string_view value = assignment.substr(eq + 1);

  if (key == "experiment_id") {
    cfg.experiment_id = std::string(value);
  } else if (key == "realizations") {
    cfg.realizations = parse_number<std::size_t>(key, value);
  } else if (key == "master_seed" || key == "seed") {
    cfg.master_seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "workers") {
    cfg.workers = parse_number<std::size_t>(key, value);
  } else if (key == "snr_db") {
    cfg.snr_db = parse_number<double>(key, value);
  } else if (key == "m_rx" || key == "M") {
    cfg.fixed.m_rx = parse_number<std::size_t>(key, value);
  } else if (key == "n_tx" || key == "N") {
    cfg.fixed.n_tx = parse_number<std::size_t>(key, value);
  } else if (key == "chi") {
    cfg.fixed.chi = parse_number<double>(key, value);
  } else if (key == "mu") {
    cfg.fixed.mu_t = cfg.fixed.mu_r = parse_number<double>(key, value);
  } else if (key == "mu_t") {
    cfg.fixed.mu_t = parse_number<double>(key, value);
  } else if (key == "mu_r") {
    cfg.fixed.mu_r = parse_number<double>(key, value);
  } else if (key == "nu") {
    cfg.fixed.nu_t = cfg.fixed.nu_r = parse_number<double>(key, value);
  } else if (key == "nu_t") {
    cfg.fixed.nu_t = parse_number<double>(key, value);
  } else if (key == "nu_r") {
    cfg.fixed.nu_r = parse_number<double>(key, value);
  } else if (key == "sweep_axis") {
    auto axis = parse_axis(value);
    if (!axis) throw ConfigError(key, "unknown axis '" + std::string(value) + "'");
    cfg.sweep_axis = *axis;
  } else if (key == "sweep_values") {
    cfg.sweep_values.clear();
    for (auto item : split(value, ',')) cfg.sweep_values.push_back(parse_number<double>(key, item));
  } else if (key == "schemes") {
    cfg.schemes.clear();
    cfg.series.clear();
    for (auto item : split(value, ',')) cfg.schemes.push_back(scheme_or_throw(key, item));
  } else if (key == "series") {
    cfg.series.clear();
    for (auto item : split(value, ',')) cfg.series.push_back(SeriesSpec::parse(item));
  } else {
    throw ConfigError(key, "unknown configuration key");
  }
}

ExperimentConfig config_from_json(std::string_view json_text, ExperimentConfig cfg) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("json", e.what());
  }
  if (!doc.is_object()) throw ConfigError("json", "top level must be an object");

  auto field = [&](const json& obj, const char* name, auto& target) {
    if (!obj.contains(name)) return;
    try {
      obj.at(name).get_to(target);
    } catch (const json::exception& e) {
      throw ConfigError(name, e.what());
    }
  };
  auto complex_field = [&](const json& obj, const char* name, Complex& target) {
    if (!obj.contains(name)) return;
    const json& v = obj.at(name);
    if (v.is_number()) {
      target = Complex(v.get<double>(), 0.0);
    } else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
      target = Complex(v[0].get<double>(), v[1].get<double>());
    } else {
      throw ConfigError(name, "expected a number or [re, im]");
    }
  };

  field(doc, "experiment_id", cfg.experiment_id);
  field(doc, "realizations", cfg.realizations);
  field(doc, "master_seed", cfg.master_seed);
  field(doc, "workers", cfg.workers);
  if (doc.contains("schemes")) {
    cfg.schemes.clear();
    cfg.series.clear();
    if (!doc["schemes"].is_array()) throw ConfigError("schemes", "expected an array of scheme tags");
    for (const auto& s : doc["schemes"]) {
      if (!s.is_string()) throw ConfigError("schemes", "expected an array of scheme tags");
      cfg.schemes.push_back(scheme_or_throw("schemes", s.get<std::string>()));
    }
  }
  if (doc.contains("series")) {
    cfg.series.clear();
    if (!doc["series"].is_array()) throw ConfigError("series", "expected an array of series labels");
    for (const auto& s : doc["series"]) {
      if (!s.is_string()) throw ConfigError("series", "expected an array of series labels");
      cfg.series.push_back(SeriesSpec::parse(s.get<std::string>()));
    }
  }
  if (doc.contains("sweep")) {
    const json& sweep = doc["sweep"];
    if (!sweep.is_object()) throw ConfigError("sweep", "expected {\"axis\": ..., \"values\": [...]}");
    if (sweep.contains("axis")) {
      if (!sweep["axis"].is_string()) throw ConfigError("sweep.axis", "expected a string");
      auto axis = parse_axis(sweep["axis"].get<std::string>());
      if (!axis) throw ConfigError("sweep.axis", "unknown axis '" + sweep["axis"].get<std::string>() + "'");
      cfg.sweep_axis = *axis;
    }
    field(sweep, "values", cfg.sweep_values);
  }
  if (doc.contains("fixed")) {
    const json& f = doc["fixed"];
    if (!f.is_object()) throw ConfigError("fixed", "expected an object");
    field(f, "m_rx", cfg.fixed.m_rx);
    field(f, "n_tx", cfg.fixed.n_tx);
    field(f, "chi", cfg.fixed.chi);
    field(f, "mu_t", cfg.fixed.mu_t);
    field(f, "mu_r", cfg.fixed.mu_r);
    if (f.contains("mu")) {
      field(f, "mu", cfg.fixed.mu_t);
      cfg.fixed.mu_r = cfg.fixed.mu_t;
    }
    complex_field(f, "nu_t", cfg.fixed.nu_t);
    complex_field(f, "nu_r", cfg.fixed.nu_r);
    if (f.contains("nu")) {
      complex_field(f, "nu", cfg.fixed.nu_t);
      cfg.fixed.nu_r = cfg.fixed.nu_t;
    }
    field(f, "snr_db", cfg.snr_db);
  }
  return cfg;
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json doc;
  doc["experiment_id"] = cfg.experiment_id;
  doc["schemes"] = json::array();
  for (SchemeId id : cfg.schemes) doc["schemes"].push_back(std::string(to_string(id)));
  doc["series"] = json::array();
  for (const auto& s : cfg.series) doc["series"].push_back(s.label());
  doc["sweep"] = {{"axis", std::string(to_string(cfg.sweep_axis))}, {"values", cfg.sweep_values}};
  doc["fixed"] = {{"m_rx", cfg.fixed.m_rx},
                  {"n_tx", cfg.fixed.n_tx},
                  {"chi", cfg.fixed.chi},
                  {"mu_t", cfg.fixed.mu_t},
                  {"mu_r", cfg.fixed.mu_r},
                  {"nu_t", {cfg.fixed.nu_t.real(), cfg.fixed.nu_t.imag()}},
                  {"nu_r", {cfg.fixed.nu_r.real(), cfg.fixed.nu_r.imag()}},
                  {"snr_db", cfg.snr_db}};
  doc["realizations"] = cfg.realizations;
  doc["master_seed"] = cfg.master_seed;
  return doc.dump(2);
}

}  // namespace polarform
