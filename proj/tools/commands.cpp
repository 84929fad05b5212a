#include "commands.hpp"

#include <filesystem>
#include <iostream>
#include <optional>
#include <random>

#include <fmt/format.h>

#include "segrega/certification.hpp"
#include "segrega/harmonic_field.hpp"
#include "segrega/io.hpp"
#include "segrega/log.hpp"
#include "segrega/models.hpp"
#include "segrega/nodal_partition.hpp"
#include "segrega/pde_solver.hpp"

namespace segrega::cli {

namespace fs = std::filesystem;

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonConvergence:
      return kNonConvergence;
    case ErrorCode::ConfigError:
    case ErrorCode::ParseError:
    case ErrorCode::OverlappingSupports:
    case ErrorCode::GapOnCircle:
    case ErrorCode::NegativeProfile:
    case ErrorCode::NonLipschitzProfile:
    case ErrorCode::InvalidProfile:
    case ErrorCode::InvalidArc:
    case ErrorCode::OddSpeciesCount:
    case ErrorCode::SpeciesCountNot6:
    case ErrorCode::InvalidGrid:
    case ErrorCode::EmptySchedule:
    case ErrorCode::InvalidSchedule:
    case ErrorCode::TruncationTooSmall:
    case ErrorCode::BoundaryPoint:
    case ErrorCode::DegenerateDatum:
      return kConfigError;
    case ErrorCode::MissingRegion:
    case ErrorCode::DisconnectedRegion:
    case ErrorCode::EulerViolation:
    case ErrorCode::IdentityViolation:
    case ErrorCode::UnclassifiableMultiset:
    case ErrorCode::TooManyCriticalPoints:
    case ErrorCode::NegativityViolation:
    case ErrorCode::UnstableMultiplicity:
    case ErrorCode::OddMultiplicityPresent:
      return kFatal;
    default:
      return kChecksFailed;
  }
}

namespace {

Json pt(Complex z) { return Json::array({z.real(), z.imag()}); }

Json report_base(const ExperimentConfig& cfg, const char* command) {
  return {{"header", cfg.header().to_json()}, {"command", command}, {"config", cfg.canonical()}};
}

void write_report(const ExperimentConfig& cfg, const std::string& name, const Json& report) {
  write_text(fs::path(cfg.out) / name, dump_json(report));
}

SolverOptions solver_options(const ExperimentConfig& cfg) {
  SolverOptions o;
  o.tol_rel = cfg.tol.solver;
  o.max_sweeps = cfg.max_sweeps;
  o.threads = cfg.threads;
  return o;
}

CertifyTolerances certify_tolerances(const ExperimentConfig& cfg) {
  return {cfg.tol.moment, cfg.tol.order, cfg.tol.derivative};
}

PartitionOptions partition_options(const ExperimentConfig& cfg) {
  PartitionOptions o;
  o.threshold_rel = cfg.tol.threshold;
  return o;
}

AlternatingDatum alternating(const ExperimentConfig& cfg) {
  const AdmissibleDatum d = datum_from_json(cfg.datum);
  if (d.k() % 2 != 0) {
    throw Error(ErrorCode::OddSpeciesCount, fmt::format("k = {} is odd; the alternating datum needs k = 2s", d.k()));
  }
  return AlternatingDatum(d);
}

Json steps_json(const std::vector<ContinuationStep>& steps) {
  Json arr = Json::array();
  for (const auto& s : steps) arr.push_back(stats_to_json(s.stats));
  return arr;
}

Json graph_json(const PartitionGraph& g) {
  return {{"n", g.n},       {"m", g.m_edges}, {"f", g.f},           {"euler", g.euler()},
          {"tree", g.tree}, {"leaves", g.leaves}, {"dangling", g.dangling}};
}

Json identity_json(const IdentityReport& r) {
  return {{"sum_index", r.sum_index}, {"expected", r.expected},      {"holds", r.holds},
          {"z3_count", r.z3_count},   {"z3_interior", r.z3_interior}, {"arcs", r.arcs},
          {"expected_arcs", r.expected_arcs}, {"multiset", r.multiset}};
}

// Partition summary shared by solve and verify: graph, identity and class,
// with fatal errors recorded instead of thrown.
Json summarize(const NodalPartition& p, bool& fatal) {
  Json out = Json::object();
  try {
    out["graph"] = graph_json(build_graph(p));
    const IdentityReport id = verify_multiplicity_identity(p);
    out["identity"] = identity_json(id);
    if (p.k == 6) out["classification"] = std::string(to_string(classify_k6(p)));
  } catch (const Error& e) {
    out["error"] = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
    fatal = fatal || exit_code(e.code()) == kFatal;
  }
  return out;
}

void write_interfaces(const ExperimentConfig& cfg, const NodalPartition& p) {
  for (std::size_t i = 0; i < p.interfaces.size(); ++i) {
    std::vector<std::vector<double>> rows;
    for (Complex z : p.interfaces[i].polyline) rows.push_back({z.real(), z.imag()});
    write_csv(fs::path(cfg.out) / fmt::format("interface_{:02}.csv", i), cfg.header(), {"x1", "x2"}, rows);
  }
}

}  // namespace

int cmd_solve(const ExperimentConfig& cfg) {
  const AdmissibleDatum datum = datum_from_json(cfg.datum);
  const PolarGrid grid(cfg.n_r, cfg.n_theta);
  Json report = report_base(cfg, "solve");
  std::vector<ContinuationStep> steps;
  try {
    steps = continuation(datum, cfg.mu_schedule, grid, solver_options(cfg));
  } catch (const NonConvergenceError& e) {
    report["steps"] = steps_json(e.completed());
    report["error"] = {{"code", "NonConvergence"}, {"mu", e.mu()}, {"message", e.what()}};
    write_report(cfg, "stats.json", report);
    std::cerr << "error: " << e.what() << "\n";
    return kNonConvergence;
  }
  report["steps"] = steps_json(steps);
  const double first = steps.front().stats.overlap;
  const double last = steps.back().stats.overlap;
  bool monotone = true;
  for (std::size_t i = 1; i < steps.size(); ++i) monotone = monotone && steps[i].stats.overlap <= steps[i - 1].stats.overlap;
  report["overlap"] = {{"first", first}, {"last", last}, {"ratio", first > 0.0 ? last / first : 0.0}, {"monotone", monotone}};
  write_report(cfg, "stats.json", report);

  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!cfg.dump_all_steps && i + 1 != steps.size()) continue;
    const std::string name = cfg.dump_all_steps ? fmt::format("grid_{:02}.csv", i) : "grid.csv";
    write_grid_dump(fs::path(cfg.out) / name, cfg.header(), steps[i].state);
  }

  bool fatal = false;
  Json part = report_base(cfg, "solve");
  try {
    const NodalPartition p = extract_partition(steps.back().state, datum, partition_options(cfg));
    part["partition"] = partition_to_json(p);
    part["summary"] = summarize(p, fatal);
    write_interfaces(cfg, p);
  } catch (const Error& e) {
    part["error"] = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
    fatal = true;
  }
  write_report(cfg, "partition.json", part);
  if (fatal) {
    std::cerr << "error: partition checks failed, see " << (fs::path(cfg.out) / "partition.json").string() << "\n";
    return kFatal;
  }
  return kOk;
}

namespace {

struct PointVerdict {
  Json json;
  bool consistent = true;
};

double rebuild_error(const MomentReport& m) {
  const auto rebuilt = monomials_from_chebyshev(m);
  double worst = 0.0;
  for (std::size_t i = 0; i < rebuilt.size() && i < m.monomial.size(); ++i) {
    worst = std::max(worst, std::abs(rebuilt[i].value - m.monomial[i].value));
  }
  return worst;
}

PointVerdict certify_point(const AlternatingDatum& ad, const FourierField& field, const DiskPoint& p,
                           const QuadratureRule& rule, const CertifyTolerances& tol, double rebuild_tol) {
  PointVerdict v;
  const TwoSPointResult r = is_2s_point(ad, p, rule, tol);
  const double rebuild = rebuild_error(r.moments);
  Json eq = {{"chebyshev_vs_monomial", r.equivalent}, {"rebuild_error", rebuild}, {"rebuild_ok", rebuild <= rebuild_tol}};
  v.consistent = r.equivalent && rebuild <= rebuild_tol;
  v.json = {{"p", pt(p.z())},
            {"moments", moments_to_json(r.moments)},
            {"is_2s_point", r.is_2s_point},
            {"a_s", r.a_s},
            {"b_s", r.b_s},
            {"leading_nonzero", r.leading_nonzero}};
  if (ad.k() == 6) {
    const double amp = ad.base().max_amplitude();
    const MomentReport k6 = k6_conditions(ad, p, rule, tol);
    const DerivativeReport series = derivative_characterization(field, p, amp, tol);
    const DerivativeReport pulled = pullback_derivatives(ad.function(), p, rule, amp, tol);
    v.json["k6_conditions"] = moments_to_json(k6);
    v.json["derivatives"] = derivatives_to_json(series);
    v.json["pullback_derivatives"] = derivatives_to_json(pulled);
    eq["k6_vs_monomial"] = k6.verdict == r.moments.verdict;
    eq["derivative_vs_k6"] = series.verdict == k6.verdict;
    eq["pullback_vs_series"] = pulled.verdict == series.verdict;
    v.consistent = v.consistent && k6.verdict == r.moments.verdict && series.verdict == k6.verdict &&
                   pulled.verdict == series.verdict;
  }
  eq["consistent"] = v.consistent;
  v.json["equivalences"] = eq;
  return v;
}

}  // namespace

int cmd_certify(const ExperimentConfig& cfg) {
  const AlternatingDatum ad = alternating(cfg);
  const QuadratureRule rule(static_cast<std::size_t>(cfg.quadrature));
  const CertifyTolerances tol = certify_tolerances(cfg);
  const FourierField field = solve_dirichlet(ad, cfg.truncation, rule);
  const double rebuild_tol = cfg.tol.moment * std::max(1.0, ad.base().max_amplitude());

  Json report = report_base(cfg, "certify");
  report["k"] = ad.k();
  report["s"] = ad.s();
  std::vector<DiskPoint> points;
  if (cfg.point) {
    points.emplace_back(*cfg.point);
    report["points_from"] = "config";
  } else {
    CriticalSearchOptions opt;
    opt.threads = cfg.threads;
    opt.quadrature_nodes = cfg.quadrature;
    for (const auto& c : find_zero_critical_points(field, ad.s(), opt).points) points.push_back(c.location);
    report["points_from"] = "zero_critical_points";
  }
  bool consistent = true;
  Json results = Json::array();
  for (const auto& p : points) {
    PointVerdict v = certify_point(ad, field, p, rule, tol, rebuild_tol);
    consistent = consistent && v.consistent;
    results.push_back(std::move(v.json));
  }
  report["results"] = results;

  if (cfg.suite_data > 0) {
    std::mt19937_64 rng(cfg.seed);
    int cases = 0, agree = 0, true_verdicts = 0;
    double worst_rebuild = 0.0;
    for (int d = 0; d < cfg.suite_data; ++d) {
      const AlternatingDatum rd(random_datum(ad.k(), rng));
      const FourierField rf = solve_dirichlet(rd, cfg.truncation, rule);
      const double rtol = cfg.tol.moment * std::max(1.0, rd.base().max_amplitude());
      for (int q = 0; q < cfg.suite_points; ++q) {
        const DiskPoint p(random_point(rng));
        const PointVerdict v = certify_point(rd, rf, p, rule, tol, rtol);
        ++cases;
        if (v.consistent) ++agree;
        if (v.json.at("is_2s_point").get<bool>()) ++true_verdicts;
        worst_rebuild = std::max(worst_rebuild, v.json.at("equivalences").at("rebuild_error").get<double>());
      }
    }
    report["suite"] = {{"cases", cases},
                       {"consistent", agree},
                       {"true_verdicts", true_verdicts},
                       {"max_rebuild_error", worst_rebuild},
                       {"seed", cfg.seed}};
    consistent = consistent && agree == cases;
  }
  report["consistent"] = consistent;
  write_report(cfg, "certify.json", report);
  if (!consistent) {
    std::cerr << "error: equivalent characterizations disagree, see certify.json\n";
    return kDisagreement;
  }
  return kOk;
}

int cmd_harmonic(const ExperimentConfig& cfg) {
  const AlternatingDatum ad = alternating(cfg);
  const PolarGrid grid(cfg.n_r, cfg.n_theta);
  const QuadratureRule rule(static_cast<std::size_t>(cfg.quadrature));
  const FourierField field = solve_dirichlet(ad, cfg.truncation, rule);
  const OutputHeader header = cfg.header();

  std::vector<std::vector<double>> coeffs;
  for (int j = 0; j <= field.truncation(); ++j) {
    coeffs.push_back({static_cast<double>(j), field.A()[static_cast<std::size_t>(j)], field.B()[static_cast<std::size_t>(j)]});
  }
  write_csv(fs::path(cfg.out) / "coefficients.csv", header, {"j", "A_j", "B_j"}, coeffs);

  std::vector<std::vector<double>> rows;
  rows.reserve(grid.cells());
  for (int m = 0; m < grid.n_r(); ++m) {
    for (int l = 0; l < grid.n_theta(); ++l) {
      rows.push_back({grid.r(m), grid.theta(l), field.eval(std::polar(grid.r(m), grid.theta(l)))});
    }
  }
  write_csv(fs::path(cfg.out) / "field.csv", header, {"r", "theta", "psi"}, rows);

  CriticalSearchOptions opt;
  opt.threads = cfg.threads;
  opt.quadrature_nodes = cfg.quadrature;
  const CriticalSearchResult crit = find_zero_critical_points(field, ad.s(), opt);
  Json report = report_base(cfg, "harmonic");
  report["s"] = ad.s();
  report["truncation"] = field.truncation();
  report["tail_energy"] = field.tail_energy();
  report["critical_points"] = critical_points_to_json(crit);
  if (cfg.point) {
    const DiskPoint p(*cfg.point);
    const Vec2 g = field.gradient(p);
    const Sym2 h = field.hessian(p);
    report["point"] = {{"p", pt(p.z())}, {"value", field.eval(p)}, {"gradient", {g.x1, g.x2}}, {"hessian", {h.h11, h.h12, h.h22}}};
  }
  write_report(cfg, "critical_points.json", report);
  return kOk;
}

int cmd_datum_validate(const ExperimentConfig& cfg) {
  const AdmissibleDatum d = datum_from_json(cfg.datum);
  Json out = {{"valid", true},
              {"k", d.k()},
              {"zeros", d.zeros()},
              {"max_amplitude", d.max_amplitude()},
              {"alternating", d.k() % 2 == 0},
              {"datum", datum_to_json(d)}};
  std::cout << dump_json(out);
  return kOk;
}

namespace {

struct VerifySource {
  std::string kind;
  std::optional<DensityGrid> state;
  std::vector<double> zeros;
  NodalPartition partition;
};

DensityGrid model_state(const std::string& name, const PolarGrid& grid) {
  if (name == "r3cos3") {
    const auto d = AdmissibleDatum::symmetric(6, kPi / 6.0);
    return densities_from_signed(grid, [](Complex z) { return std::pow(std::abs(z), 3) * std::cos(3.0 * std::arg(z)); }, d);
  }
  if (name == "x1") {
    const auto d = AdmissibleDatum::symmetric(2, kPi / 2.0);
    return densities_from_signed(grid, [](Complex z) { return z.real(); }, d);
  }
  if (name == "six") return tree_densities(grid, k6_tree_six());
  if (name == "four_four") return tree_densities(grid, k6_tree_four_four());
  if (name == "three_five") return tree_densities(grid, k6_tree_three_five());
  if (name == "four_three_three") return tree_densities(grid, k6_tree_four_three_three());
  if (name == "quad_triple") return tree_densities(grid, k6_tree_quad_triple());
  throw Error(ErrorCode::ConfigError, "unknown model '" + name +
                                          "' (r3cos3, x1, six, four_four, three_five, four_three_three, quad_triple)");
}

std::vector<double> model_zeros(const std::string& name) {
  if (name == "r3cos3") return AdmissibleDatum::symmetric(6, kPi / 6.0).zeros();
  if (name == "x1") return AdmissibleDatum::symmetric(2, kPi / 2.0).zeros();
  return k6_tree_six().zeros;
}

bool harmonic_model(const std::string& name) { return name == "r3cos3" || name == "x1"; }

std::vector<double> boundary_total(const DensityGrid& s) {
  std::vector<double> b(static_cast<std::size_t>(s.grid.n_theta()), 0.0);
  for (int l = 0; l < s.grid.n_theta(); ++l) {
    for (int i = 0; i < s.k; ++i) b[static_cast<std::size_t>(l)] += s.bnd(l, i);
  }
  return b;
}

VerifySource load_source(const ExperimentConfig& cfg) {
  VerifySource src;
  src.kind = cfg.source;
  const PartitionOptions popt = partition_options(cfg);
  if (cfg.source == "model") {
    src.state = model_state(cfg.model, PolarGrid(cfg.n_r, cfg.n_theta));
    src.zeros = model_zeros(cfg.model);
    src.partition = extract_partition(*src.state, src.zeros, popt);
  } else if (cfg.source == "file") {
    if (cfg.partition.empty()) throw Error(ErrorCode::ConfigError, "source 'file' needs 'partition'");
    const StoredPartition stored = partition_from_json(read_json_file(cfg.partition));
    PartitionOptions opt = popt;
    opt.threshold_rel = stored.threshold_rel;
    std::vector<double> U(stored.grid.cells(), 0.0);
    std::vector<double> Ub(static_cast<std::size_t>(stored.grid.n_theta()), 0.0);
    if (!cfg.grid_dump.empty()) {
      src.state = read_grid_dump(cfg.grid_dump, datum_from_json(cfg.datum));
      if (src.state->grid.n_r() != stored.grid.n_r() || src.state->grid.n_theta() != stored.grid.n_theta() ||
          src.state->k != stored.k) {
        throw Error(ErrorCode::ConfigError, "grid dump and partition file disagree on grid or k");
      }
      U = src.state->total();
      Ub = boundary_total(*src.state);
    }
    src.zeros = stored.zeros;
    src.partition =
        partition_from_labels(stored.grid, stored.k, stored.labels, stored.zeros, U, Ub, stored.amplitude, opt);
  } else {
    const AdmissibleDatum datum = datum_from_json(cfg.datum);
    auto steps = continuation(datum, cfg.mu_schedule, PolarGrid(cfg.n_r, cfg.n_theta), solver_options(cfg));
    src.state = std::move(steps.back().state);
    src.zeros = datum.zeros();
    src.partition = extract_partition(*src.state, datum, popt);
  }
  return src;
}

std::vector<std::string> default_checks(const ExperimentConfig& cfg, const VerifySource& src) {
  std::vector<std::string> c = {"identity", "graph"};
  if (src.partition.k == 6) c.push_back("classify");
  const bool analytic = src.state && (cfg.source != "model" || harmonic_model(cfg.model));
  if (analytic) {
    c.push_back("fit");
    c.push_back("reflection");
    c.push_back("membership");
  }
  return c;
}

Json check(const std::string& name, bool pass, Json measured, Json tolerance, const char* provenance) {
  return {{"name", name},
          {"pass", pass},
          {"measured", std::move(measured)},
          {"tolerance", std::move(tolerance)},
          {"provenance", provenance}};
}

Json error_json(const Error& e) { return {{"code", std::string(to_string(e.code()))}, {"message", e.what()}}; }

}  // namespace

int cmd_verify(const ExperimentConfig& cfg) {
  VerifySource src = load_source(cfg);
  NodalPartition& p = src.partition;
  const std::vector<std::string> checks = cfg.checks.empty() ? default_checks(cfg, src) : cfg.checks;
  bool fatal = false;
  bool all = true;
  Json results = Json::array();

  for (const auto& name : checks) {
    Json c;
    try {
      if (name == "identity") {
        const IdentityReport r = verify_multiplicity_identity(p);
        const bool ok = r.holds && r.arcs_ok && r.z3_nonempty && r.z3_bound && r.even_ok && r.count_ok;
        fatal = fatal || !ok;
        c = check(name, ok, identity_json(r), {{"exact", true}}, "nodal_partition.verify_multiplicity_identity");
      } else if (name == "graph") {
        const PartitionGraph g = build_graph(p);
        const bool ok = g.euler_ok && g.tree && g.dangling == 0;
        fatal = fatal || !ok;
        c = check(name, ok, graph_json(g), {{"euler", 2}, {"tree", true}}, "nodal_partition.build_graph");
      } else if (name == "classify") {
        if (p.k != 6) throw Error(ErrorCode::SpeciesCountNot6, "classification needs k = 6");
        const K6Class k = classify_k6(p);
        c = check(name, true, {{"class", std::string(to_string(k))}}, Json(), "nodal_partition.classify_k6");
      } else if (name == "fit") {
        if (!src.state) throw Error(ErrorCode::ConfigError, "the fit needs densities (grid_dump)");
        const DensityGrid proj = src.state->projected();
        const GridSampler profile(p.grid, proj.total(), p.U_boundary);
        const GridSampler raw(p.grid, p.U, p.U_boundary);
        Json pts = Json::array();
        bool ok = true;
        for (auto& mp : p.multiple_points) {
          FitOptions fo;
          fo.radius = default_fit_radius(p, mp.location);
          fo.max_residual = cfg.tol.fit_residual;
          fo.exponent_tol = cfg.tol.exponent;
          Json e = {{"x", pt(mp.location)}, {"multiplicity", mp.multiplicity}, {"radius", fo.radius}};
          try {
            const ExponentFit f = local_exponent_fit([&](Complex x) { return profile(x); }, mp.location,
                                                     mp.multiplicity, fo);
            mp.phase = f.phase;
            mp.fit_exponent = f.exponent;
            e["exponent"] = f.exponent;
            e["expected"] = 0.5 * mp.multiplicity;
            e["phase"] = f.phase;
            e["residual"] = f.residual;
            e["means"] = f.means;
            e["ok"] = f.exponent_ok;
            ok = ok && f.exponent_ok;
          } catch (const Error& err) {
            e["error"] = error_json(err);
            ok = false;
          }
          try {
            e["exponent_raw_U"] =
                local_exponent_fit([&](Complex x) { return raw(x); }, mp.location, mp.multiplicity, fo).exponent;
          } catch (const Error&) {
            e["exponent_raw_U"] = nullptr;
          }
          pts.push_back(e);
        }
        c = check(name, ok, {{"points", pts}}, {{"exponent", cfg.tol.exponent}, {"fit_residual", cfg.tol.fit_residual}},
                  "nodal_partition.local_exponent_fit");
      } else if (name == "reflection") {
        if (!src.state) throw Error(ErrorCode::ConfigError, "the reflection check needs densities (grid_dump)");
        const ReflectionReport r = gradient_reflection_check(*src.state, p);
        const bool ok = !r.samples.empty() && r.median_angle_error <= cfg.tol.reflection_angle &&
                        r.median_mismatch <= cfg.tol.reflection_mismatch;
        Json decay = Json::array();
        for (const auto& [a, b] : r.decay_near_points) decay.push_back({a, b});
        c = check(name, ok,
                  {{"samples", r.samples.size()},
                   {"median_angle_error", r.median_angle_error},
                   {"max_angle_error", r.max_angle_error},
                   {"median_mismatch", r.median_mismatch},
                   {"max_mismatch", r.max_mismatch},
                   {"min_grad_norm", r.min_grad_norm},
                   {"grad_near_points", decay}},
                  {{"median_angle_error", cfg.tol.reflection_angle}, {"median_mismatch", cfg.tol.reflection_mismatch}},
                  "nodal_partition.gradient_reflection_check");
      } else if (name == "membership") {
        if (!src.state) throw Error(ErrorCode::ConfigError, "membership needs densities (grid_dump)");
        const MembershipReport r = membership_checks(*src.state, cfg.tol.harmonic_factor);
        const bool ok = r.subharmonic_ok && r.superharmonic_ok && r.nonnegative_ok;
        c = check(name, ok,
                  {{"subharmonic_violation", r.subharmonic_violation},
                   {"superharmonic_violation", r.superharmonic_violation},
                   {"min_value", r.min_value},
                   {"negative_cells", r.negative_cells},
                   {"overlap", r.overlap}},
                  {{"residual", r.tolerance}}, "pde_solver.membership_checks");
      } else if (name == "reconstruction") {
        if (!src.state) throw Error(ErrorCode::ConfigError, "reconstruction needs densities (grid_dump)");
        const ReconstructionReport r = reconstruct_alternating(*src.state, p, cfg.tol.harmonic_factor);
        c = check(name, r.harmonic,
                  {{"residual", r.residual},
                   {"residual_raw", r.residual_raw},
                   {"reference", r.reference},
                   {"residual_near_points", r.residual_near_points}},
                  {{"residual", r.tolerance}}, "nodal_partition.reconstruct_alternating");
      }
    } catch (const Error& e) {
      c = check(name, false, {{"error", error_json(e)}}, Json(), "verify");
      fatal = fatal || exit_code(e.code()) == kFatal;
    }
    all = all && c.at("pass").get<bool>();
    results.push_back(std::move(c));
  }

  Json report = report_base(cfg, "verify");
  report["source"] = src.kind;
  if (cfg.source == "model") report["model"] = cfg.model;
  report["checks"] = results;
  report["pass"] = all;
  write_report(cfg, "verify.json", report);
  Json part = report_base(cfg, "verify");
  part["partition"] = partition_to_json(p);
  write_report(cfg, "partition.json", part);
  if (fatal) return kFatal;
  return all ? kOk : kChecksFailed;
}

}  // namespace segrega::cli
