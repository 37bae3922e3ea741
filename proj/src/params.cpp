#include "lpe/params.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "lpe/circuit.hpp"

namespace lpe {

double sigma_ratio(std::size_t m) {
  const double md = static_cast<double>(m);
  return std::sqrt(md * std::log2(md));
}

double Profile::sigma(std::size_t eta) const {
  if (eta <= 1) return sigma_1;
  return sigma_1 * std::pow(sigma_ratio(m), static_cast<double>(eta - 1));
}

std::vector<double> Profile::sigma_schedule() const {
  std::vector<double> s;
  for (std::size_t e = 1; e <= eta_max; ++e) s.push_back(sigma(e));
  return s;
}

void Profile::validate() const {
  if (n == 0) throw InvalidArgument("profile: n must be positive");
  if (q < 3 || q >= (u64(1) << 62) || !is_prime(q)) throw InvalidArgument("profile: q must be an odd prime below 2^62");
  if (k != bit_length(q)) throw InvalidArgument("profile: k must equal ceil(log2 q)");
  if (m != 2 * n * k) throw InvalidArgument("profile: m must equal 2 n k");
  if (d == 0 || d >= q) throw InvalidArgument("profile: need 1 <= d < q");
  if (ell == 0 || ell >= 63 || (u64(1) << ell) > q) throw InvalidArgument("profile: need 2^ell <= q");
  if (chi0 == 0) throw InvalidArgument("profile: chi0 must be positive");
  if (!(sigma_1 > 0) || !std::isfinite(sigma_1)) throw InvalidArgument("profile: sigma_1 must be positive");
  if (!(c_tg > 0) || !(c_ebr > 0) || !(power_tol > 0)) throw InvalidArgument("profile: slack constants must be positive");
  runtime_budget(runtime_class);
}

double beta_analytic(double p, double d_wires, std::size_t m, std::size_t tau) {
  if (p < 2) throw InvalidArgument("beta_analytic: p must be at least 2");
  if (tau == 0) throw InvalidArgument("beta_analytic: tau must be at least 1");
  using ld = long double;
  const ld geo = (std::pow(static_cast<ld>(p), static_cast<ld>(d_wires)) - 1) / (static_cast<ld>(p) - 1);
  const ld r = std::pow(geo * static_cast<ld>(m), static_cast<ld>(tau)) * 20 * std::sqrt(static_cast<ld>(m));
  if (!std::isfinite(r) || r > std::numeric_limits<double>::max()) return std::numeric_limits<double>::infinity();
  return static_cast<double>(r);
}

double worst_circuit_bound(const Profile& p) {
  const Modulus mod(p.q);
  const Circuit c = build_f_tstar(0, p.d, p.ell);
  const ZqVector x(p.wires(), 0);
  return noise_bound(mod, c, x, static_cast<double>(p.m) * static_cast<double>(p.chi0), p.m);
}

double sigma1_for(const Profile& p) {
  const double m = static_cast<double>(p.m);
  if (p.sigma_mode == SigmaMode::Practical)
    return p.c_tg * std::sqrt(static_cast<double>(p.n * p.k)) * 3.0 * std::sqrt(std::log2(2 * m));
  const std::size_t tau = p.ell > 1 ? p.ell - 1 : 1;
  return beta_analytic(2, static_cast<double>(p.wires()), p.m, tau) * std::sqrt(std::log2(2 * m)) *
         std::sqrt(std::log2(m));
}

Profile make_profile(std::string name, std::size_t n, u64 q, std::size_t d, std::size_t ell, std::size_t eta_max,
                     u64 chi0, std::string runtime_class, SigmaMode mode) {
  Profile p;
  p.name = std::move(name);
  p.n = n;
  p.q = q;
  p.k = q >= 2 ? bit_length(q) : 0;
  p.m = 2 * n * p.k;
  p.d = d;
  p.ell = ell;
  p.eta_max = eta_max;
  p.chi0 = chi0;
  p.sigma_mode = mode;
  p.runtime_class = std::move(runtime_class);
  p.sigma_1 = sigma1_for(p);
  p.validate();
  return p;
}

bool theorem2_check(const Profile& p, std::size_t eta, double beta) {
  if (p.chi0 == 0) throw InvalidArgument("theorem2_check: chi0 = 0 makes the right-hand side undefined");
  if (eta > p.eta_max) throw InvalidArgument("theorem2_check: eta above eta_max");
  using ld = long double;
  const ld m = static_cast<ld>(p.m);
  const ld e1 = static_cast<ld>(eta + 1);
  const ld lhs = e1 * e1 * std::sqrt(m) * std::pow(std::sqrt(m * std::log2(m)), static_cast<ld>(eta)) *
                     std::sqrt(std::log2(m)) * static_cast<ld>(beta) * static_cast<ld>(beta) +
                 2;
  const ld rhs = static_cast<ld>(p.q) / (4 * static_cast<ld>(p.chi0));
  return std::isfinite(lhs) && lhs < rhs;
}

BudgetReport practical_check(const Profile& p, std::size_t eta, const std::vector<double>& deltas) {
  if (deltas.size() != eta) throw InvalidArgument("practical_check: need one circuit bound per level");
  BudgetReport r;
  const double m = static_cast<double>(p.m), chi0 = static_cast<double>(p.chi0);
  r.sigma_eta = p.sigma(eta);
  r.rt_sup = static_cast<double>(eta + 1) * m * r.sigma_eta;
  double sum = 0;
  for (double x : deltas) sum += x;
  r.noise_norm = chi0 * std::sqrt(m) + sum * std::sqrt(m);
  r.bound = chi0 + r.rt_sup * r.noise_norm;
  r.quarter_q = static_cast<double>(p.q) / 4.0;
  r.ok = r.bound < r.quarter_q;
  return r;
}

std::string BudgetReport::text() const {
  std::ostringstream os;
  os << std::setprecision(6);
  os << "budget_ok = " << (ok ? "true" : "false") << "\n";
  os << "sigma_eta = " << sigma_eta << "\n";
  os << "rt_sup_bound = " << rt_sup << "\n";
  os << "noise_norm_bound = " << noise_norm << "\n";
  os << "decryption_bound = " << bound << "\n";
  os << "quarter_q = " << quarter_q << "\n";
  os << "margin = " << margin() << "\n";
  return os.str();
}

unsigned pkey_entry_bits(const Profile& p, std::size_t eta) {
  const double bound = p.sigma(eta) * std::sqrt(static_cast<double>((eta + 1) * p.m));
  return static_cast<unsigned>(std::ceil(std::log2(2 * bound)));
}

SizeReport size_formulas(const Profile& p, std::size_t eta) {
  SizeReport s;
  const double D = static_cast<double>(p.wires()), n = static_cast<double>(p.n), m = static_cast<double>(p.m),
               k = static_cast<double>(p.k);
  s.pk_bits = (D + 2) * n * m * k;
  s.ct_bits = (D + 2) * m * k;
  const double side0 = m, side = static_cast<double>(eta + 1) * m;
  s.sk0_bits = side0 * side0 * pkey_entry_bits(p, 0);
  s.pkey_bits = side * side * pkey_entry_bits(p, eta);
  const double lq = std::log2(static_cast<double>(p.q)), nlq = n * lq;
  s.pk_asym = (static_cast<double>(p.d) + 1) * n * n * lq * lq;
  s.sk0_asym = n * n * lq * lq * std::log2(nlq);
  const double tau = p.ell > 1 ? static_cast<double>(p.ell - 1) : 1.0;
  const double beta = beta_analytic(2, D, p.m, static_cast<std::size_t>(tau));
  s.pkey_asym = static_cast<double>(eta + 1) * nlq * (std::log2(beta) + static_cast<double>(eta) * std::log2(nlq));
  s.ct_asym = (static_cast<double>(p.d) + 2) * n * lq * lq;
  return s;
}

std::string SizeReport::text() const {
  std::ostringstream os;
  os << std::setprecision(10);
  os << "pk_bits = " << pk_bits << "\n";
  os << "sk0_bits = " << sk0_bits << "\n";
  os << "pkey_bits = " << pkey_bits << "\n";
  os << "ct_bits = " << ct_bits << "\n";
  os << "pk_asymptotic = " << pk_asym << "\n";
  os << "sk0_asymptotic = " << sk0_asym << "\n";
  os << "pkey_asymptotic = " << pkey_asym << "\n";
  os << "ct_asymptotic = " << ct_asym << "\n";
  return os.str();
}

double runtime_budget(const std::string& c) {
  if (c == "fast") return 2e9;
  if (c == "medium") return 2e10;
  if (c == "slow") return 2e11;
  throw InvalidArgument("unknown runtime class '" + c + "'");
}

Profile profile_search(std::size_t n, std::size_t d, std::size_t ell, std::size_t eta_max, u64 chi0,
                       const std::string& runtime_class, const std::string& name) {
  if (n == 0 || d == 0 || ell == 0 || chi0 == 0) throw InvalidArgument("profile_search: inputs must be positive");
  const double budget = runtime_budget(runtime_class);
  for (unsigned j = 2; j <= 61; ++j) {
    const u64 q = next_prime(u64(1) << j);
    if (q >= (u64(1) << 62)) break;
    if (ell >= 63 || (u64(1) << ell) > q || d >= q) continue;
    const std::size_t m = 2 * n * bit_length(q);
    const double cost = std::pow(static_cast<double>((eta_max + 1) * m), 3);
    if (cost > budget)
      throw SearchFailure("no feasible q: runtime cap of class '" + runtime_class + "' reached at q = " +
                          std::to_string(q) + " before noise < q/4 held");
    const Profile p = make_profile(name, n, q, d, ell, eta_max, chi0, runtime_class);
    const double delta = worst_circuit_bound(p);
    bool ok = true;
    for (std::size_t eta = 0; eta <= eta_max && ok; ++eta) {
      const BudgetReport r = practical_check(p, eta, std::vector<double>(eta, delta));
      ok = 2 * r.bound < r.quarter_q;
    }
    if (ok) return p;
  }
  throw SearchFailure("no feasible q below 2^62: noise >= q/4 at every candidate");
}

namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

template <class T>
T parse_uint(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  unsigned long long x = 0;
  try {
    if (v.empty() || v[0] == '-') throw std::invalid_argument(v);
    x = std::stoull(v, &pos, 10);
  } catch (const std::exception&) {
    throw InvalidArgument("profile: bad value for " + key + ": '" + v + "'");
  }
  if (pos != v.size()) throw InvalidArgument("profile: bad value for " + key + ": '" + v + "'");
  return static_cast<T>(x);
}

double parse_real(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double x = 0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw InvalidArgument("profile: bad value for " + key + ": '" + v + "'");
  }
  if (pos != v.size()) throw InvalidArgument("profile: bad value for " + key + ": '" + v + "'");
  return x;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string profile_to_text(const Profile& p) {
  std::ostringstream os;
  os << "name = " << p.name << "\n";
  os << "n = " << p.n << "\n";
  os << "q = " << p.q << "\n";
  os << "k = " << p.k << "\n";
  os << "m = " << p.m << "\n";
  os << "d = " << p.d << "\n";
  os << "ell = " << p.ell << "\n";
  os << "eta_max = " << p.eta_max << "\n";
  os << "chi0 = " << p.chi0 << "\n";
  os << "sigma_mode = " << (p.sigma_mode == SigmaMode::Practical ? "practical" : "paper") << "\n";
  os << "sigma_1 = " << fmt_double(p.sigma_1) << "\n";
  os << "sigma_list =";
  const auto s = p.sigma_schedule();
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? ", " : " ") << fmt_double(s[i]);
  os << "\n";
  os << "c_tg = " << fmt_double(p.c_tg) << "\n";
  os << "c_ebr = " << fmt_double(p.c_ebr) << "\n";
  os << "power_tol = " << fmt_double(p.power_tol) << "\n";
  os << "epsilon = " << fmt_double(p.epsilon) << "\n";
  os << "runtime_class = " << p.runtime_class << "\n";
  return os.str();
}

Profile profile_from_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw InvalidArgument("profile line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(t.substr(0, eq)), val = trim(t.substr(eq + 1));
    if (!kv.emplace(key, val).second) throw InvalidArgument("profile: duplicate key " + key);
  }
  static const char* known[] = {"name", "n", "q", "k", "m", "d", "ell", "eta_max", "chi0", "sigma_mode",
                                "sigma_1", "sigma_list", "c_tg", "c_ebr", "power_tol", "epsilon", "runtime_class"};
  for (const auto& [key, v] : kv) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw InvalidArgument("profile: unknown key " + key);
  }
  auto need = [&](const char* key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw InvalidArgument(std::string("profile: missing key ") + key);
    return it->second;
  };
  Profile p;
  p.name = need("name");
  p.n = parse_uint<std::size_t>("n", need("n"));
  p.q = parse_uint<u64>("q", need("q"));
  p.k = parse_uint<unsigned>("k", need("k"));
  p.m = parse_uint<std::size_t>("m", need("m"));
  p.d = parse_uint<std::size_t>("d", need("d"));
  p.ell = parse_uint<std::size_t>("ell", need("ell"));
  p.eta_max = parse_uint<std::size_t>("eta_max", need("eta_max"));
  p.chi0 = parse_uint<u64>("chi0", need("chi0"));
  const std::string& mode = need("sigma_mode");
  if (mode == "practical") p.sigma_mode = SigmaMode::Practical;
  else if (mode == "paper") p.sigma_mode = SigmaMode::Paper;
  else throw InvalidArgument("profile: sigma_mode must be practical or paper");
  p.sigma_1 = parse_real("sigma_1", need("sigma_1"));
  if (kv.count("c_tg")) p.c_tg = parse_real("c_tg", kv["c_tg"]);
  if (kv.count("c_ebr")) p.c_ebr = parse_real("c_ebr", kv["c_ebr"]);
  if (kv.count("power_tol")) p.power_tol = parse_real("power_tol", kv["power_tol"]);
  if (kv.count("epsilon")) p.epsilon = parse_real("epsilon", kv["epsilon"]);
  if (kv.count("runtime_class")) p.runtime_class = kv["runtime_class"];
  p.validate();
  if (kv.count("sigma_list")) {
    std::vector<double> listed;
    std::istringstream ls(kv["sigma_list"]);
    std::string item;
    while (std::getline(ls, item, ',')) {
      const std::string t = trim(item);
      if (!t.empty()) listed.push_back(parse_real("sigma_list", t));
    }
    const auto s = p.sigma_schedule();
    if (listed.size() != s.size()) throw InvalidArgument("profile: sigma_list length must equal eta_max");
    for (std::size_t i = 0; i < s.size(); ++i)
      if (std::fabs(listed[i] - s[i]) > 1e-9 * s[i]) throw InvalidArgument("profile: sigma_list disagrees with the schedule");
  }
  return p;
}

Profile load_profile(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw FormatError("cannot open profile '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return profile_from_text(ss.str());
}

}  // namespace lpe
