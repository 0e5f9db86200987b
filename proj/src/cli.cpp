#include "gaugelab/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "gaugelab/ccr_lab.hpp"
#include "gaugelab/displacement.hpp"
#include "gaugelab/format.hpp"
#include "gaugelab/gauge_sector.hpp"
#include "gaugelab/maxwell_rs.hpp"
#include "gaugelab/modes.hpp"

namespace gaugelab::cli {

using nlohmann::json;

json default_config() {
  return json::parse(R"({
    "grid":    {"kmin": 1.0, "kmax": 10000.0, "n_shells": 4096, "spacing": "log",
                "shells_per_decade": 0},
    "profile": {"kind": "coulomb", "e": 1.0, "mu": 0.01, "m": 100.0, "t": 0.0},
    "scan":    {"kmax_values": [10.0, 100.0, 1000.0, 10000.0]},
    "overlap": {"t_values": [0.0, 1.0, 10.0]},
    "fock":    {"modes": 3, "n_max": 12, "alpha": 0.5},
    "gauge":   {"n_max": 3, "k": [0.3, -0.4, 1.2], "weight": 0.05, "chi": [0.3, 0.2],
                "points": 16, "extent": 3.0},
    "pj":      {"eps": 0.05, "kmin": 1e-6, "kmax": 800.0, "n_shells": 8192, "points": 20,
                "t_range": 1.5, "r_min": 0.1, "r_max": 1.5},
    "rs":      {"n": 32, "L": 6.283185307179586, "dt": 0.01, "steps": 100,
                "snapshot_every": 0, "init": "random"},
    "weyl":    {"n": 256, "spacing": 0.1, "beta_sites": 5, "windings": [1, 2, 3],
                "alphas": [0.37, 1.1]},
    "ccr":     {"dims": [2, 4, 8, 16, 32], "pairs": 100, "n_max": 32, "max_power": 3}
  })");
}

namespace {

bool same_kind(const json& a, const json& b) {
  if (a.is_number() && b.is_number()) return !(a.is_number_integer() && b.is_number_float());
  return a.type() == b.type();
}

void merge_at(json& cfg, const json& user, const std::string& path) {
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string key = path.empty() ? it.key() : path + "." + it.key();
    if (!cfg.contains(it.key())) throw ParameterError("unknown config key '" + key + "'");
    json& slot = cfg[it.key()];
    if (slot.is_object()) {
      if (!it->is_object()) throw ParameterError("config key '" + key + "' must be a section");
      merge_at(slot, *it, key);
    } else {
      if (!same_kind(slot, *it)) throw ParameterError("config key '" + key + "' has the wrong type");
      slot = *it;
    }
  }
}

// Typed config access with consistent error messages.
template <class T>
T get(const json& cfg, const std::string& section, const std::string& key) {
  try {
    return cfg.at(section).at(key).get<T>();
  } catch (const json::exception&) {
    throw ParameterError("config key '" + section + "." + key + "' is missing or malformed");
  }
}

std::size_t get_count(const json& cfg, const std::string& section, const std::string& key,
                      std::size_t min_value) {
  const auto v = get<long long>(cfg, section, key);
  if (v < static_cast<long long>(min_value))
    throw ParameterError(section + "." + key + " must be >= " + std::to_string(min_value));
  return static_cast<std::size_t>(v);
}

double get_positive(const json& cfg, const std::string& section, const std::string& key) {
  const auto v = get<double>(cfg, section, key);
  if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError(section + "." + key + " must be positive");
  return v;
}

// Runs f(i) for i in [0, n) on up to `threads` workers; results are indexed,
// so output order does not depend on scheduling.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& f) {
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) f(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

Spacing parse_spacing(const std::string& s) {
  if (s == "log") return Spacing::Log;
  if (s == "linear") return Spacing::Linear;
  throw ParameterError("grid.spacing must be 'log' or 'linear'");
}

std::size_t shell_count(const json& cfg, double kmin, double kmax) {
  const auto spd = get<double>(cfg, "grid", "shells_per_decade");
  if (spd < 0.0) throw ParameterError("grid.shells_per_decade must be >= 0");
  if (spd > 0.0) return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(spd * std::log10(kmax / kmin))));
  return get_count(cfg, "grid", "n_shells", 1);
}

ModeProfile make_profile(const json& cfg, GridPtr grid, double t) {
  const auto kind = get<std::string>(cfg, "profile", "kind");
  const double e = get<double>(cfg, "profile", "e");
  if (kind == "coulomb") return coulomb_profile(e, std::move(grid), t);
  if (kind == "screened")
    return screened_coulomb_profile(e, get<double>(cfg, "profile", "mu"),
                                    get<double>(cfg, "profile", "m"), std::move(grid));
  throw ParameterError("profile.kind must be 'coulomb' or 'screened'");
}

std::string round_for_console(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string jsonl(const std::vector<ReportRecord>& records) {
  std::string s;
  for (const auto& r : records) s += r.to_jsonl();
  return s;
}

void summarize(const std::vector<ReportRecord>& records, std::ostream& console) {
  std::size_t passed = 0;
  for (const auto& r : records) passed += r.pass ? 1 : 0;
  console << passed << "/" << records.size() << " checks passed\n";
  for (const auto& r : records)
    if (!r.pass)
      console << "  FAIL " << r.check << " residual=" << round_for_console(r.residual)
              << " bound=" << round_for_console(r.bound) << "\n";
}

ReportRecord record(std::string check, json params, double residual, double bound) {
  ReportRecord r;
  r.check = std::move(check);
  r.params = nlohmann::ordered_json::parse(params.dump());
  r.residual = residual;
  r.bound = bound;
  r.pass = residual <= bound;
  return r;
}

double relative(double value, double reference) {
  return std::abs(value - reference) / std::max(std::abs(reference), 1e-300);
}

// ---- experiments -----------------------------------------------------------

std::vector<OutputFile> scan_number(const RunContext& ctx, std::ostream& console) {
  const json& cfg = ctx.config;
  const double kmin = get_positive(cfg, "grid", "kmin");
  const auto spacing = parse_spacing(get<std::string>(cfg, "grid", "spacing"));
  const auto kmaxes = get<std::vector<double>>(cfg, "scan", "kmax_values");
  if (kmaxes.empty()) throw ParameterError("scan.kmax_values must not be empty");
  for (double k : kmaxes)
    if (!(k > kmin)) throw ParameterError("scan.kmax_values must exceed grid.kmin");
  const double t = get<double>(cfg, "profile", "t");
  make_profile(cfg, build_isotropic_grid(kmin, kmaxes.front(), 2, spacing), t);  // validates

  struct Row { std::size_t n; double n0; double overlap; double mu; double m; };
  std::vector<Row> rows(kmaxes.size());
  parallel_for(kmaxes.size(), ctx.threads, [&](std::size_t i) {
    const std::size_t n = shell_count(cfg, kmin, kmaxes[i]);
    const auto profile = make_profile(cfg, build_isotropic_grid(kmin, kmaxes[i], n, spacing), t);
    const double n0 = number_integral(profile);
    rows[i] = {n, n0, vacuum_overlap(DisplacementSpec::from_profile(profile)).normalized_modulus,
               profile.mu, profile.m};
  });

  std::ostringstream csv;
  csv << "kmin,kmax,n_shells,e,mu,m,N0,overlap_normalized\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    csv << fmt_double(kmin) << ',' << fmt_double(kmaxes[i]) << ',' << rows[i].n << ','
        << fmt_double(get<double>(cfg, "profile", "e")) << ','
        << fmt_double(rows[i].mu) << ',' << fmt_double(rows[i].m) << ',' << fmt_double(rows[i].n0) << ','
        << fmt_double(rows[i].overlap) << '\n';
    console << "kmax=" << round_for_console(kmaxes[i]) << " N0=" << round_for_console(rows[i].n0)
            << " overlap=" << round_for_console(rows[i].overlap) << "\n";
  }
  return {{"scan_number.csv", csv.str()}};
}

std::vector<OutputFile> overlap(const RunContext& ctx, std::ostream& console) {
  const json& cfg = ctx.config;
  const double kmin = get_positive(cfg, "grid", "kmin");
  const double kmax = get_positive(cfg, "grid", "kmax");
  const auto spacing = parse_spacing(get<std::string>(cfg, "grid", "spacing"));
  const auto ts = get<std::vector<double>>(cfg, "overlap", "t_values");
  const auto grid = build_isotropic_grid(kmin, kmax, shell_count(cfg, kmin, kmax), spacing);
  std::ostringstream csv;
  csv << "t,kmin,kmax,n_shells,N0,raw_re,raw_im,overlap_normalized\n";
  for (double t : ts) {
    const auto profile = make_profile(cfg, grid, t);
    const auto ov = vacuum_overlap(DisplacementSpec::from_profile(profile));
    const double n0 = number_integral(profile);
    csv << fmt_double(t) << ',' << fmt_double(kmin) << ',' << fmt_double(kmax) << ','
        << grid->size() << ',' << fmt_double(n0) << ',' << fmt_double(ov.raw.real()) << ','
        << fmt_double(ov.raw.imag()) << ',' << fmt_double(ov.normalized_modulus) << '\n';
    console << "t=" << round_for_console(t) << " overlap=" << round_for_console(ov.normalized_modulus)
            << "\n";
  }
  return {{"overlap.csv", csv.str()}};
}

std::vector<OutputFile> oracle_check(const RunContext& ctx, std::ostream& console) {
  const json& cfg = ctx.config;
  const std::size_t n_modes = get_count(cfg, "fock", "modes", 1);
  const std::size_t n_max = get_count(cfg, "fock", "n_max", 1);
  const double amp = get<double>(cfg, "fock", "alpha");
  if (amp < 0.0) throw ParameterError("fock.alpha must be >= 0");

  // Even modes time-like, odd modes spatial; phases from the seed.
  std::mt19937_64 rng(ctx.seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  std::vector<ModeLabel> modes;
  DisplacementSpec spec;
  for (std::size_t i = 0; i < n_modes; ++i) {
    const ModeLabel m{i, i % 2 == 0 ? 0 : 1 + static_cast<int>(i % 3)};
    modes.push_back(m);
    spec.entries.push_back({m, std::polar(amp, phase(rng))});
  }
  const FockRep rep(modes, n_max);
  check_truncation_guard(spec, rep);

  const json params = {{"modes", n_modes}, {"n_max", n_max}, {"alpha", amp}, {"seed", ctx.seed}};
  std::vector<ReportRecord> out;
  const double tol = 1e-8;
  const auto closed = vacuum_overlap(spec);
  const auto dense = dense_vacuum_overlap(spec, rep);
  out.push_back(record("overlap_raw", params, std::abs(dense.raw - closed.raw) / std::abs(closed.raw), tol));
  out.push_back(record("overlap_normalized", params,
                       relative(dense.normalized_modulus, closed.normalized_modulus), tol));
  out.push_back(record("expected_N0", params,
                       relative(dense_expected_N0_in_displaced(spec, rep), expected_N0_in_displaced(spec)), tol));
  out.push_back(record("expected_Ntilde", params,
                       relative(dense_expected_Ntilde_in_vacuum(spec, rep), expected_Ntilde_in_vacuum(spec)), tol));
  out.push_back(record("number_identity", params, number_identity_residual(spec, rep), tol));
  summarize(out, console);
  return {{"oracle_check.jsonl", jsonl(out)}};
}

std::vector<OutputFile> gauge_check(const RunContext& ctx, std::ostream& console) {
  const json& cfg = ctx.config;
  const std::size_t n_max = get_count(cfg, "gauge", "n_max", 2);
  const auto kv = get<std::vector<double>>(cfg, "gauge", "k");
  const auto chiv = get<std::vector<double>>(cfg, "gauge", "chi");
  if (kv.size() != 3 || chiv.size() != 2) throw ParameterError("gauge.k needs 3 and gauge.chi 2 entries");
  const Vec3 k{kv[0], kv[1], kv[2]};
  if (norm3(k) == 0.0) throw ParameterError("gauge.k must be nonzero");
  const double weight = get_positive(cfg, "gauge", "weight");
  const std::size_t points = get_count(cfg, "gauge", "points", 1);
  const double extent = get_positive(cfg, "gauge", "extent");

  auto grid = std::make_shared<ModeGrid>();
  grid->nodes = {k};
  grid->weights = {weight};
  grid->kmin = grid->kmax = norm3(k);
  const std::size_t idx0 = 0;
  const FockRep rep(lorentz_modes(std::span<const std::size_t>(&idx0, 1)), n_max);
  const GaugeFunction chi{grid, {cplx(chiv[0], chiv[1])}};
  const json params = {{"n_max", n_max}, {"k", kv}, {"weight", weight}};
  std::vector<ReportRecord> out;

  const auto b = unphysical_ladder(rep, 0, k);
  const auto safe = safe_indices(rep);
  const std::array<const OperatorMatrix*, 2> bs{&b.b1, &b.b2};
  const std::array<const OperatorMatrix*, 2> bds{&b.b1_dag, &b.b2_dag};
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      OperatorMatrix c = *bs[i] * *bds[j] - *bds[j] * *bs[i];
      if (i == j) c.diagonal().array() -= 1.0;
      out.push_back(record("b_commutator_" + std::to_string(i + 1) + std::to_string(j + 1), params,
                           restricted_norm(c, safe), 1e-12));
    }

  const auto e1 = transverse_basis(k).e1;
  StateVector transverse = StateVector::Zero(static_cast<BasisIndex>(rep.dim()));
  for (int j = 1; j <= 3; ++j)
    transverse += e1[static_cast<std::size_t>(j - 1)] * (ladder(rep, {0, j}).a_dag * vacuum(rep));
  const auto phys = physical_state_check(transverse, rep, *grid, 1e-12);
  out.push_back(record("transverse_photon_physical", params, phys.residual, 1e-12));
  const auto unphys = physical_state_check(b.b2_dag * vacuum(rep), rep, *grid, 1e-12);
  // Residual 1 if the check wrongly accepts b2^dagger|0>.
  out.push_back(record("b2dag_vacuum_unphysical", params, unphys.physical ? 1.0 : 0.0, 0.0));

  const OperatorMatrix qa = build_gauge_charge(chi, rep);
  const OperatorMatrix qb = build_gauge_charge_via_b(chi, rep);
  out.push_back(record("gauge_charge_routes", params, (qa - qb).norm(), 1e-12));

  std::mt19937_64 rng(ctx.seed);
  std::uniform_real_distribution<double> coord(-extent, extent);
  double worst_shift = 0.0;
  double worst_div = 0.0;
  for (std::size_t p = 0; p < points; ++p) {
    const Vec4 x{coord(rng), coord(rng), coord(rng), coord(rng)};
    worst_shift = std::max(worst_shift, gauge_shift_residual(chi, rep, x));
    worst_div = std::max(worst_div, (field_divergence_operator(rep, *grid, x) -
                                     field_divergence_via_b(rep, *grid, x)).norm());
  }
  json pp = params;
  pp["points"] = points;
  out.push_back(record("gauge_shift", pp, worst_shift, 1e-10));
  out.push_back(record("divergence_routes", pp, worst_div, 1e-12));
  out.push_back(record("null_contraction", params, null_contraction_residual(gauge_profile(chi)), 1e-14));
  summarize(out, console);
  return {{"gauge_check.jsonl", jsonl(out)}};
}

std::vector<OutputFile> pj_check(const RunContext& ctx, std::ostream& console) {
  const json& cfg = ctx.config;
  const double eps = get_positive(cfg, "pj", "eps");
  const double kmin = get_positive(cfg, "pj", "kmin");
  const double kmax = get_positive(cfg, "pj", "kmax");
  const std::size_t n = get_count(cfg, "pj", "n_shells", 1);
  const std::size_t points = get_count(cfg, "pj", "points", 1);
  const double t_range = get_positive(cfg, "pj", "t_range");
  const double r_min = get_positive(cfg, "pj", "r_min");
  const double r_max = get_positive(cfg, "pj", "r_max");
  if (r_max < r_min) throw ParameterError("pj.r_max must be >= pj.r_min");
  const auto grid = build_isotropic_grid(kmin, kmax, n, Spacing::Linear);

  std::mt19937_64 rng(ctx.seed);
  std::uniform_real_distribution<double> tdist(-t_range, t_range);
  std::uniform_real_distribution<double> rdist(r_min, r_max);
  const json params = {{"eps", eps}, {"kmin", kmin}, {"kmax", kmax}, {"n_shells", n}};
  std::ostringstream csv;
  csv << "x0,r,closed_re,closed_im,modesum_re,modesum_im,rel_err\n";
  double worst = 0.0;
  double worst_equal_time = 0.0;
  const double peak = 1.0 / (4.0 * kPi * kPi * eps * eps);
  for (std::size_t p = 0; p < points; ++p) {
    const double x0 = tdist(rng);
    const double r = rdist(rng);
    const Vec4 x{x0, 0.0, 0.0, r};
    const cplx c = pauli_jordan_plus_closed(x, eps);
    const cplx s = pauli_jordan_plus_modesum(*grid, x, eps);
    const double err = std::abs(s - c) / std::abs(c);
    worst = std::max(worst, err);
    csv << fmt_double(x0) << ',' << fmt_double(r) << ',' << fmt_double(c.real()) << ','
        << fmt_double(c.imag()) << ',' << fmt_double(s.real()) << ',' << fmt_double(s.imag()) << ','
        << fmt_double(err) << '\n';
    const Vec4 xe{0.0, 0.0, 0.0, r};
    const cplx d = pauli_jordan_plus_modesum(*grid, xe, eps) + pauli_jordan_minus_modesum(*grid, xe, eps);
    worst_equal_time = std::max(worst_equal_time, std::abs(d) / peak);
  }
  std::vector<ReportRecord> out;
  out.push_back(record("pj_plus_modesum", params, worst, 0.01));
  out.push_back(record("pj_equal_time", params, worst_equal_time, 1e-3));
  summarize(out, console);
  return {{"pj_check.csv", csv.str()}, {"pj_check.jsonl", jsonl(out)}};
}

std::vector<OutputFile> rs_evolve(const RunContext& ctx, std::ostream& console) {
  const json& cfg = ctx.config;
  const std::size_t n = get_count(cfg, "rs", "n", 8);
  const double box = get_positive(cfg, "rs", "L");
  const double dt = get<double>(cfg, "rs", "dt");
  const std::size_t steps = get_count(cfg, "rs", "steps", 0);
  const std::size_t every = get_count(cfg, "rs", "snapshot_every", 0);
  const auto init = get<std::string>(cfg, "rs", "init");
  const CubicGrid grid(n, box);
  if (init != "random" && init != "helicity") throw ParameterError("rs.init must be 'random' or 'helicity'");

  RSField psi = [&] {
    if (init == "helicity")
      return helicity_plane_wave({0.0, 0.0, 2.0 * kPi / box}, Handedness::R, grid);
    std::mt19937_64 rng(ctx.seed);
    std::normal_distribution<double> g;
    RealVectorField e{grid, std::vector<Vec3>(grid.size())};
    RealVectorField b{grid, std::vector<Vec3>(grid.size())};
    for (auto& v : e.values) v = {g(rng), g(rng), g(rng)};
    for (auto& v : b.values) v = {g(rng), g(rng), g(rng)};
    return rs_from_EB(e, b);
  }();

  std::vector<OutputFile> files;
  std::ostringstream csv;
  csv << "step,t,energy,divergence_norm,energy_R,energy_L\n";
  auto emit = [&](std::size_t step, const RSField& f) {
    csv << step << ',' << fmt_double(static_cast<double>(step) * dt) << ',' << fmt_double(energy(f))
        << ',' << fmt_double(divergence(f).norm()) << ','
        << fmt_double(energy(helicity_projection(f, Handedness::R))) << ','
        << fmt_double(energy(helicity_projection(f, Handedness::L))) << '\n';
    if (every > 0 && step % every == 0) {
      std::ostringstream snap;
      write_snapshot_csv(f, snap);
      char name[64];
      std::snprintf(name, sizeof name, "rs_snapshot_%06zu.csv", step);
      files.push_back({name, snap.str()});
    }
  };
  const double e0 = energy(psi);
  const double d0 = divergence(psi).norm();
  emit(0, psi);
  for (std::size_t s = 1; s <= steps; ++s) {
    psi = evolve(psi, dt);
    emit(s, psi);
  }
  console << "energy drift " << round_for_console(relative(energy(psi), e0)) << ", divergence drift "
          << round_for_console(d0 > 0 ? relative(divergence(psi).norm(), d0) : divergence(psi).norm())
          << "\n";
  files.insert(files.begin(), {"rs_evolve.csv", csv.str()});
  return files;
}

std::vector<OutputFile> weyl(const RunContext& ctx, std::ostream& console) {
  const json& cfg = ctx.config;
  const LatticeLine lat(get_count(cfg, "weyl", "n", 2), get_positive(cfg, "weyl", "spacing"));
  const auto m = get<long long>(cfg, "weyl", "beta_sites");
  const double beta = static_cast<double>(m) * lat.spacing;
  const auto windings = get<std::vector<long long>>(cfg, "weyl", "windings");
  const auto alphas = get<std::vector<double>>(cfg, "weyl", "alphas");
  std::vector<ReportRecord> out;
  for (long long w : windings) {
    const double alpha = 2.0 * kPi * static_cast<double>(w) / lat.length();
    const json p = {{"n", lat.n}, {"spacing", lat.spacing}, {"beta", beta}, {"alpha", alpha}, {"winding", w}};
    out.push_back(record("weyl_commensurate", p, weyl_relation_residual(lat, alpha, beta), 1e-12));
  }
  for (double alpha : alphas) {
    const json p = {{"n", lat.n}, {"spacing", lat.spacing}, {"beta", beta}, {"alpha", alpha}};
    // Wrapped rows each carry |1 - e^{-i alpha L}|.
    const double expected = std::sqrt(static_cast<double>(std::llabs(m) % static_cast<long long>(lat.n))) *
                            std::abs(1.0 - std::polar(1.0, -alpha * lat.length()));
    ReportRecord r = record("weyl_incommensurate", p, weyl_relation_residual(lat, alpha, beta), expected);
    r.pass = std::abs(r.residual - expected) <= 1e-9 * std::max(1.0, expected);
    out.push_back(r);
  }
  summarize(out, console);
  return {{"weyl.jsonl", jsonl(out)}};
}

std::vector<OutputFile> ccr_report(const RunContext& ctx, std::ostream& console) {
  const json& cfg = ctx.config;
  const auto dims = get<std::vector<long long>>(cfg, "ccr", "dims");
  const std::size_t pairs = get_count(cfg, "ccr", "pairs", 1);
  const std::size_t n_max = get_count(cfg, "ccr", "n_max", 1);
  const auto max_power = static_cast<int>(get_count(cfg, "ccr", "max_power", 1));
  for (long long d : dims)
    if (d < 2) throw ParameterError("ccr.dims entries must be >= 2");
  if (static_cast<std::size_t>(max_power) > n_max)
    throw GuardError("ccr.max_power exceeds the safe depth n_max");

  std::vector<std::vector<ReportRecord>> per_dim(dims.size());
  parallel_for(dims.size(), ctx.threads, [&](std::size_t di) {
    const auto dim = static_cast<std::size_t>(dims[di]);
    const auto osc = truncated_oscillator(dim);
    const auto ob = trace_obstruction(osc.q, osc.p);
    const json p = {{"dim", dim}};
    auto& recs = per_dim[di];
    ReportRecord r = record("oscillator_residual", p, ob.actual_residual, static_cast<double>(dim));
    r.pass = std::abs(ob.actual_residual - static_cast<double>(dim)) <= 1e-10 * static_cast<double>(dim);
    recs.push_back(r);
    // Each dimension gets its own stream so results do not depend on --threads.
    std::mt19937_64 rng(ctx.seed + 7919 * dim);
    std::normal_distribution<double> g;
    const auto n = static_cast<Eigen::Index>(dim);
    double min_residual = INFINITY;
    double max_trace = 0.0;
    for (std::size_t k = 0; k < pairs; ++k) {
      Eigen::MatrixXcd q(n, n), pm(n, n);
      for (Eigen::Index i = 0; i < n * n; ++i) q.data()[i] = cplx(g(rng), g(rng));
      for (Eigen::Index i = 0; i < n * n; ++i) pm.data()[i] = cplx(g(rng), g(rng));
      const auto t = trace_obstruction(q, pm);
      min_residual = std::min(min_residual, t.actual_residual);
      max_trace = std::max(max_trace, std::abs(t.trace_of_commutator) / (q.norm() * pm.norm()));
    }
    json pr = p;
    pr["pairs"] = pairs;
    ReportRecord lb = record("random_pair_lower_bound", pr, min_residual, ob.frobenius_lower_bound);
    lb.pass = min_residual >= ob.frobenius_lower_bound;
    recs.push_back(lb);
    recs.push_back(record("random_pair_trace", pr, max_trace, 1e-12));
  });

  std::vector<ReportRecord> out;
  for (auto& v : per_dim) out.insert(out.end(), v.begin(), v.end());
  const auto osc = truncated_oscillator(n_max + 1);
  for (int k = 1; k <= max_power; ++k) {
    const json p = {{"n_max", n_max}, {"power", k}};
    out.push_back(record("commutator_power_safe", p, commutator_power_residual(osc.q, osc.p, k), 1e-10));
    ReportRecord full = record("commutator_power_full", p, commutator_power_residual_full(osc.q, osc.p, k), 0.0);
    full.pass = true;  // edge contamination, reported only
    out.push_back(full);
  }
  summarize(out, console);
  return {{"ccr_report.jsonl", jsonl(out)}};
}

using Experiment = std::vector<OutputFile> (*)(const RunContext&, std::ostream&);

const std::map<std::string, Experiment>& registry() {
  static const std::map<std::string, Experiment> r{
      {"scan-number", scan_number}, {"overlap", overlap},     {"oracle-check", oracle_check},
      {"gauge-check", gauge_check}, {"pj-check", pj_check},   {"rs-evolve", rs_evolve},
      {"weyl", weyl},               {"ccr-report", ccr_report}};
  return r;
}

}  // namespace

void merge_config(json& cfg, const json& user) {
  if (!user.is_object()) throw ParameterError("config must be a JSON object");
  merge_at(cfg, user, "");
}

void apply_override(json& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ParameterError("--set expects KEY=VALUE, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string raw = assignment.substr(eq + 1);
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;

  json user = value;
  std::vector<std::string> parts;
  std::stringstream ss(key);
  for (std::string part; std::getline(ss, part, '.');) parts.push_back(part);
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) user = json{{*it, user}};
  merge_config(cfg, user);
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, f] : registry()) v.push_back(k);
    return v;
  }();
  return names;
}

std::vector<OutputFile> run_experiment(const std::string& name, const RunContext& ctx,
                                       std::ostream& console) {
  const auto it = registry().find(name);
  if (it == registry().end()) {
    std::string valid;
    for (const auto& n : experiment_names()) valid += (valid.empty() ? "" : ", ") + n;
    throw ParameterError("unknown experiment '" + name + "'; valid experiments: " + valid);
  }
  return it->second(ctx, console);
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"gaugelab: numerical checks for Krein-space photon models"};
  std::string experiment;
  std::string config_path;
  std::vector<std::string> sets;
  std::string out_dir = ".";
  std::uint64_t seed = 12345;
  unsigned threads = 1;
  app.add_option("experiment", experiment, "one of: scan-number, overlap, oracle-check, gauge-check, "
                                           "pj-check, rs-evolve, weyl, ccr-report")
      ->required();
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--set", sets, "override KEY=VALUE (dotted key, repeatable)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "random seed");
  app.add_option("--threads", threads, "worker threads")->check(CLI::Range(1u, 1024u));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParameter;
  }

  try {
    RunContext ctx;
    ctx.config = default_config();
    ctx.seed = seed;
    ctx.threads = threads;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ParameterError("cannot read config file '" + config_path + "'");
      const json user = json::parse(in, nullptr, false);
      if (user.is_discarded()) throw ParameterError("config file '" + config_path + "' is not valid JSON");
      merge_config(ctx.config, user);
    }
    for (const auto& s : sets) apply_override(ctx.config, s);
    if (!std::filesystem::is_directory(out_dir))
      throw ParameterError("output directory '" + out_dir + "' does not exist");

    const auto files = run_experiment(experiment, ctx, out);
    for (const auto& f : files) write_file_atomic(std::filesystem::path(out_dir) / f.name, f.contents);
    return kExitOk;
  } catch (const ParameterError& e) {
    err << "parameter error: " << e.what() << "\n";
    return kExitParameter;
  } catch (const ContractError& e) {
    err << "contract error: " << e.what() << "\n";
    return kExitParameter;
  } catch (const GuardError& e) {
    err << "guard violation: " << e.what() << "\n";
    return kExitGuard;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace gaugelab::cli
