#include "coulomb/runspec.hpp"

#include <charconv>
#include <cstdio>
#include <map>
#include <sstream>

#include "coulomb/parallel.hpp"

namespace coulomb {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v, int line) {
  try {
    std::size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ParseError("invalid numeric value for " + key + ": '" + v + "'", line);
  }
}

std::uint64_t parse_uint(const std::string& key, const std::string& v, int line) {
  std::uint64_t x = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ParseError("invalid integer value for " + key + ": '" + v + "'", line);
  return x;
}

bool parse_bool(const std::string& key, const std::string& v, int line) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ParseError("invalid boolean value for " + key + ": '" + v + "'", line);
}

std::vector<double> parse_list(const std::string& key, const std::string& v, int line) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_double(key, item, line));
  }
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void validate_spec(const RunSpec& s) {
  if (s.model_dim < 2) throw ParseError("model.dim must be >= 2");
  if (s.model_beta <= 0) throw ParseError("model.beta must be positive");
  if (s.model_n < 1) throw ParseError("model.n must be >= 1");
  if (s.model_confinement == "gaussian" && s.model_confinement_c <= 0)
    throw ParseError("model.confinement_c must be positive");
  if (s.sampler_step <= 0) throw ParseError("sampler.step must be positive");
  if (s.sampler_thin < 1) throw ParseError("sampler.thin must be >= 1");
  if (s.drift_cutoff <= 0) throw ParseError("drift.cutoff must be positive");
  if (s.drift_taylor_order < 0) throw ParseError("drift.taylor_order must be >= 0");
  if (s.dyn_dt <= 0) throw ParseError("dyn.dt must be positive");
  if (s.dyn_t_end <= 0) throw ParseError("dyn.t_end must be positive");
  if (s.diag_replicas < 1) throw ParseError("diag.replicas must be >= 1");
  for (const std::string& name :
       {s.model_confinement, s.model_kernel, s.model_domain, s.drift_mode,
        s.dyn_scheme, s.dyn_coeff}) {
    (void)name;  // enum values checked by the make_* builders below
  }
}

}  // namespace

RunSpec parse_config(const std::string& text) {
  RunSpec s;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected 'key = value'", line_no);
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", line_no);

    if (key == "model.dim") s.model_dim = parse_uint(key, val, line_no);
    else if (key == "model.beta") s.model_beta = parse_double(key, val, line_no);
    else if (key == "model.n") s.model_n = parse_uint(key, val, line_no);
    else if (key == "model.confinement") s.model_confinement = val;
    else if (key == "model.confinement_c") s.model_confinement_c = parse_double(key, val, line_no);
    else if (key == "model.kernel") s.model_kernel = val;
    else if (key == "model.kernel_amp") s.model_kernel_amp = parse_double(key, val, line_no);
    else if (key == "model.kernel_len") s.model_kernel_len = parse_double(key, val, line_no);
    else if (key == "model.domain") s.model_domain = val;
    else if (key == "model.domain_radius") s.model_domain_radius = parse_double(key, val, line_no);
    else if (key == "model.domain_side") s.model_domain_side = parse_double(key, val, line_no);
    else if (key == "sampler.step") s.sampler_step = parse_double(key, val, line_no);
    else if (key == "sampler.burn_in") s.sampler_burn_in = parse_uint(key, val, line_no);
    else if (key == "sampler.samples") s.sampler_samples = parse_uint(key, val, line_no);
    else if (key == "sampler.thin") s.sampler_thin = parse_uint(key, val, line_no);
    else if (key == "drift.mode") s.drift_mode = val;
    else if (key == "drift.cutoff") s.drift_cutoff = parse_double(key, val, line_no);
    else if (key == "drift.taylor_order") s.drift_taylor_order = static_cast<int>(parse_uint(key, val, line_no));
    else if (key == "dyn.dt") s.dyn_dt = parse_double(key, val, line_no);
    else if (key == "dyn.t_end") s.dyn_t_end = parse_double(key, val, line_no);
    else if (key == "dyn.scheme") s.dyn_scheme = val;
    else if (key == "dyn.reflect_radius") s.dyn_reflect_radius = parse_double(key, val, line_no);
    else if (key == "dyn.snapshot_every") s.dyn_snapshot_every = parse_uint(key, val, line_no);
    else if (key == "dyn.adaptive") s.dyn_adaptive = parse_bool(key, val, line_no);
    else if (key == "dyn.coeff") s.dyn_coeff = val;
    else if (key == "dyn.coeff_eps") s.dyn_coeff_eps = parse_double(key, val, line_no);
    else if (key == "diag.radii") s.diag_radii = parse_list(key, val, line_no);
    else if (key == "diag.q") s.diag_q = parse_double(key, val, line_no);
    else if (key == "diag.replicas") s.diag_replicas = parse_uint(key, val, line_no);
    else if (key == "diag.probe_radius") s.diag_probe_radius = parse_double(key, val, line_no);
    else if (key == "seed") s.seed = parse_uint(key, val, line_no);
    else if (key == "threads") s.threads = parse_uint(key, val, line_no);
    else if (key == "out_dir") s.out_dir = val;
    else throw ParseError("unknown key '" + key + "'", line_no);
  }
  validate_spec(s);
  return s;
}

std::string serialize_runspec(const RunSpec& s) {
  std::ostringstream out;
  out << "model.dim = " << s.model_dim << "\n";
  out << "model.beta = " << fmt(s.model_beta) << "\n";
  out << "model.n = " << s.model_n << "\n";
  out << "model.confinement = " << s.model_confinement << "\n";
  out << "model.confinement_c = " << fmt(s.model_confinement_c) << "\n";
  out << "model.kernel = " << s.model_kernel << "\n";
  out << "model.kernel_amp = " << fmt(s.model_kernel_amp) << "\n";
  out << "model.kernel_len = " << fmt(s.model_kernel_len) << "\n";
  out << "model.domain = " << s.model_domain << "\n";
  out << "model.domain_radius = " << fmt(s.model_domain_radius) << "\n";
  out << "model.domain_side = " << fmt(s.model_domain_side) << "\n";
  out << "sampler.step = " << fmt(s.sampler_step) << "\n";
  out << "sampler.burn_in = " << s.sampler_burn_in << "\n";
  out << "sampler.samples = " << s.sampler_samples << "\n";
  out << "sampler.thin = " << s.sampler_thin << "\n";
  out << "drift.mode = " << s.drift_mode << "\n";
  out << "drift.cutoff = " << fmt(s.drift_cutoff) << "\n";
  out << "drift.taylor_order = " << s.drift_taylor_order << "\n";
  out << "dyn.dt = " << fmt(s.dyn_dt) << "\n";
  out << "dyn.t_end = " << fmt(s.dyn_t_end) << "\n";
  out << "dyn.scheme = " << s.dyn_scheme << "\n";
  out << "dyn.reflect_radius = " << fmt(s.dyn_reflect_radius) << "\n";
  out << "dyn.snapshot_every = " << s.dyn_snapshot_every << "\n";
  out << "dyn.adaptive = " << (s.dyn_adaptive ? "true" : "false") << "\n";
  out << "dyn.coeff = " << s.dyn_coeff << "\n";
  out << "dyn.coeff_eps = " << fmt(s.dyn_coeff_eps) << "\n";
  if (!s.diag_radii.empty()) {
    out << "diag.radii = ";
    for (std::size_t k = 0; k < s.diag_radii.size(); ++k)
      out << (k ? ", " : "") << fmt(s.diag_radii[k]);
    out << "\n";
  }
  out << "diag.q = " << fmt(s.diag_q) << "\n";
  out << "diag.replicas = " << s.diag_replicas << "\n";
  out << "diag.probe_radius = " << fmt(s.diag_probe_radius) << "\n";
  out << "seed = " << s.seed << "\n";
  out << "threads = " << s.threads << "\n";
  out << "out_dir = " << s.out_dir << "\n";
  return out.str();
}

GibbsModel make_model(const RunSpec& s) {
  GibbsModel m;
  m.dim = s.model_dim;
  m.beta = s.model_beta;
  m.n_particles = s.model_n;

  if (s.model_confinement == "zero") m.confinement = ConfinementField::zero();
  else if (s.model_confinement == "gaussian")
    m.confinement = ConfinementField::gaussian(s.model_confinement_c);
  else if (s.model_confinement == "sphere") m.confinement = ConfinementField::sphere();
  else throw ParseError("unknown model.confinement '" + s.model_confinement + "'");

  if (s.model_kernel == "free") m.kernel = PairKernel::free_coulomb(s.model_dim);
  else if (s.model_kernel == "torus") m.kernel = PairKernel::torus();
  else if (s.model_kernel == "sphere") m.kernel = PairKernel::sphere();
  else throw ParseError("unknown model.kernel '" + s.model_kernel + "'");

  m.kernel_amplitude = s.model_kernel_amp;
  m.kernel_length = s.model_kernel_len;

  if (s.model_domain == "full") m.domain = Domain::full_space();
  else if (s.model_domain == "ball") m.domain = Domain::ball(s.model_domain_radius);
  else if (s.model_domain == "torus") m.domain = Domain::torus(s.model_domain_side);
  else throw ParseError("unknown model.domain '" + s.model_domain + "'");

  m.validate();
  return m;
}

ChainParams make_chain_params(const RunSpec& s) {
  ChainParams p;
  p.step_size = s.sampler_step;
  p.burn_in = s.sampler_burn_in;
  p.n_samples = s.sampler_samples;
  p.thinning = s.sampler_thin;
  p.seed = s.seed;
  return p;
}

DynSpec make_dyn_spec(const RunSpec& s) {
  DynSpec d;
  d.dt = s.dyn_dt;
  d.t_end = s.dyn_t_end;
  if (s.dyn_scheme == "free") d.scheme = Scheme::Free;
  else if (s.dyn_scheme == "reflected") d.scheme = Scheme::ReflectedFrozen;
  else throw ParseError("unknown dyn.scheme '" + s.dyn_scheme + "'");
  d.reflect_radius = s.dyn_reflect_radius;

  if (s.drift_mode == "naive") d.drift_spec.mode = DriftMode::NaiveTruncation;
  else if (s.drift_mode == "corrected") d.drift_spec.mode = DriftMode::Corrected;
  else if (s.drift_mode == "translation")
    d.drift_spec.mode = DriftMode::TranslationInvariant;
  else throw ParseError("unknown drift.mode '" + s.drift_mode + "'");
  d.drift_spec.cutoff_R = s.drift_cutoff;
  d.drift_spec.taylor_order_l0 = s.drift_taylor_order;

  if (s.dyn_coeff == "identity") d.coeff_field = CoefficientField::identity();
  else if (s.dyn_coeff == "diagonal")
    d.coeff_field = CoefficientField::diagonal(s.dyn_coeff_eps);
  else throw ParseError("unknown dyn.coeff '" + s.dyn_coeff + "'");

  d.seed = s.seed;
  d.adaptive = s.dyn_adaptive;
  d.snapshot_every = s.dyn_snapshot_every;
  return d;
}

}  // namespace coulomb
